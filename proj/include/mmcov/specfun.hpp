#pragma once

#include "mmcov/quadrature.hpp"

#include <cstdint>

namespace mmcov::specfun
{

/// Generalized exponential integral E_p(z) = int_1^inf t^{-p} e^{-zt} dt for
/// any real order p. At z = 0 only p > 1 is admissible (value 1/(p-1)).
double gen_exp_integral(double p, double z, const QuadratureSpec& spec = {});

/// Lower incomplete gamma gamma(s, x) = int_0^x t^{s-1} e^{-t} dt.
double lower_incomplete_gamma(double s, double x);

/// Eulerian number <n, k> from the alternating sum; zero outside 0 <= k < n
/// except <0, 0> = 1. Exact for n <= 20, throws std::overflow_error beyond.
std::uint64_t eulerian(int n, int k);

/// <n, k> / n! evaluated by the positive three-term recurrence, usable for
/// any n where the integer itself would overflow.
double eulerian_over_factorial(int n, int k);

/// int_0^inf (sin x / x)^{2p} dx in closed form via Eulerian numbers.
double sinc_power_integral(int p);

/// xi(alpha) = int_0^inf |sin x / x|^{4/alpha} dx for alpha in (2, 3).
/// Memoized per alpha; safe for concurrent callers.
double xi(double alpha, const QuadratureSpec& spec = {});

/// x (x-1) ... (x-n+1); 1 for n = 0.
double falling_factorial(double x, int n);

struct SeriesBudget
{
  long max_terms = 2'000'000;
  double rel_tol = 1e-15;
};

/// Gauss 2F1(a, b; c; z) for z <= 0 through the Pfaff transformation onto
/// z/(z-1) in [0, 1).
double hyp2f1_neg(double a, double b, double c, double z, const SeriesBudget& budget = {});

/// J_k(x) = 3F2(k+1/2, k-delta, k+M; k+1, k+1-delta; x) for x <= 0, valid
/// for |x| > 1 through the Euler integral over the (k+1/2, k+1) pair.
double hyp3f2_J(int k, int m, double delta, double x, const QuadratureSpec& spec = {});

} // namespace mmcov::specfun
