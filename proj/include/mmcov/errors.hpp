#pragma once

#include <stdexcept>
#include <string>

namespace mmcov
{

// Invalid user-supplied configuration (bad flag values, violated invariants).
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures of the numerical machinery.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a special function.
class DomainError : public NumericError
{
public:
  using NumericError::NumericError;
};

// Series or iteration did not reach its tolerance within the budget.
class ConvergenceError : public NumericError
{
public:
  using NumericError::NumericError;
};

// Adaptive integration could not meet the requested error bound.
class QuadratureError : public NumericError
{
public:
  using NumericError::NumericError;
};

// A computed quantity violates a structural guarantee (sign, range).
class ValidityError : public NumericError
{
public:
  using NumericError::NumericError;
};

} // namespace mmcov
