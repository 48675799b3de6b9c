#pragma once

#include <functional>

namespace mmcov
{

// Tolerances shared by every numeric integral in the library.
struct QuadratureSpec
{
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 15; // bisection depth of the adaptive rule

  void validate() const;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (15-point) on a finite interval. Throws
// QuadratureError when the error estimate exceeds max(abs_tol, rel_tol*|I|).
double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

// Double-exponential rule on a finite interval; tolerates integrable
// endpoint singularities.
double integrate_singular(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

// Double-exponential rule on [a, inf).
double integrate_to_infinity(const Integrand& f, double a, const QuadratureSpec& spec = {});

} // namespace mmcov
