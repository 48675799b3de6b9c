#include "mmcov/quadrature.hpp"

#include "mmcov/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace mmcov
{

void QuadratureSpec::validate() const
{
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw ConfigError("quadrature tolerances must be strictly positive");
  if (max_subdivisions < 1)
    throw ConfigError("quadrature max_subdivisions must be >= 1");
}

namespace
{

void check_error(const char* rule, double value, double error, const QuadratureSpec& spec)
{
  if (!std::isfinite(value))
    throw QuadratureError(std::string(rule) + ": non-finite integral");
  const double allowed = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
  if (error > allowed)
  {
    std::ostringstream os;
    os << rule << ": error estimate " << error << " exceeds tolerance " << allowed;
    throw QuadratureError(os.str());
  }
}

// Boost's relative termination tolerance; the absolute floor is enforced
// afterwards by check_error.
double boost_tol(const QuadratureSpec& spec)
{
  return std::max(spec.rel_tol * 0.1, 64 * std::numeric_limits<double>::epsilon());
}

} // namespace

double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec)
{
  if (a == b)
    return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try
  {
    value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, static_cast<unsigned>(spec.max_subdivisions), boost_tol(spec), &error, &l1);
  }
  catch (const std::domain_error& e)
  {
    throw QuadratureError(std::string("gauss-kronrod: ") + e.what());
  }
  check_error("gauss-kronrod", value, error, spec);
  return value;
}

double integrate_singular(const Integrand& f, double a, double b, const QuadratureSpec& spec)
{
  if (a == b)
    return 0.0;
  boost::math::quadrature::tanh_sinh<double> rule(static_cast<std::size_t>(spec.max_subdivisions));
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try
  {
    value = rule.integrate(f, a, b, boost_tol(spec), &error, &l1);
  }
  catch (const std::domain_error& e)
  {
    throw QuadratureError(std::string("tanh-sinh: ") + e.what());
  }
  check_error("tanh-sinh", value, error, spec);
  return value;
}

double integrate_to_infinity(const Integrand& f, double a, const QuadratureSpec& spec)
{
  boost::math::quadrature::exp_sinh<double> rule(static_cast<std::size_t>(spec.max_subdivisions));
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try
  {
    value = rule.integrate(f, a, std::numeric_limits<double>::infinity(), boost_tol(spec), &error, &l1);
  }
  catch (const std::domain_error& e)
  {
    throw QuadratureError(std::string("exp-sinh: ") + e.what());
  }
  check_error("exp-sinh", value, error, spec);
  return value;
}

} // namespace mmcov
