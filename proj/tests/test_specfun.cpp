#include "doctest.h"

#include "mmcov/errors.hpp"
#include "mmcov/specfun.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace mmcov;
using namespace mmcov::specfun;
using std::numbers::pi;

namespace
{
double rel_err(double a, double b)
{
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}
} // namespace

TEST_CASE("gen_exp_integral: closed values at z = 0")
{
  const double delta = 2.0 / 2.1;
  CHECK(gen_exp_integral(1.0 + delta, 0.0) == doctest::Approx(1.0 / delta).epsilon(1e-15));
  CHECK(gen_exp_integral(2.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(gen_exp_integral(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(gen_exp_integral(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(gen_exp_integral(1.5, -0.1), DomainError);
}

TEST_CASE("gen_exp_integral: p = 0.95, z = 3.7 against two quadrature rules")
{
  const double series = oracle::exp_integral_series(0.95, 3.7);
  const double kronrod = oracle::exp_integral_kronrod(0.95, 3.7);
  REQUIRE(rel_err(series, kronrod) < 1e-10);
  CHECK(rel_err(gen_exp_integral(0.95, 3.7), series) < 1e-9);
}

TEST_CASE("gen_exp_integral: negative orders and E_1 reference")
{
  const double delta = 2.0 / 2.2;
  for (int k = 2; k <= 5; ++k)
  {
    const double p = 1.0 + delta - k;
    for (double z : {1e-6, 1e-3, 0.2, 1.0, 7.5, 25.0})
      CHECK(rel_err(gen_exp_integral(p, z), oracle::exp_integral_series(p, z)) < 1e-8);
  }
  // E_1(1) = 0.219383934395520...
  CHECK(gen_exp_integral(1.0, 1.0) == doctest::Approx(0.21938393439552027).epsilon(1e-10));
}

TEST_CASE("gen_exp_integral: derivative identity dE_p/dz = -E_{p-1}")
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> p_dist(-1.5, 2.5);
  std::uniform_real_distribution<double> z_dist(0.05, 6.0);
  for (int i = 0; i < 20; ++i)
  {
    const double p = p_dist(rng);
    const double z = z_dist(rng);
    const double h = 1e-4 * z;
    const double fd = (gen_exp_integral(p, z + h) - gen_exp_integral(p, z - h)) / (2.0 * h);
    CHECK(rel_err(-fd, gen_exp_integral(p - 1.0, z)) < 1e-5);
  }
}

TEST_CASE("gen_exp_integral: strictly decreasing in z and in p")
{
  for (double p : {0.3, 0.95, 1.6})
  {
    double previous = gen_exp_integral(p, 0.01);
    for (double z = 0.1; z < 20.0; z *= 1.7)
    {
      const double value = gen_exp_integral(p, z);
      CHECK(value < previous);
      CHECK(value > 0.0);
      previous = value;
    }
  }
  for (double z : {0.05, 1.0, 5.0})
    CHECK(gen_exp_integral(0.5, z) > gen_exp_integral(0.9, z));
}

TEST_CASE("lower_incomplete_gamma")
{
  for (double t : {0.1, 1.0, 3.3})
    CHECK(lower_incomplete_gamma(1.0, t) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-14));
  CHECK(lower_incomplete_gamma(2.5, 0.0) == 0.0);
  CHECK(rel_err(lower_incomplete_gamma(2.5, 4.0), oracle::lower_gamma_series(2.5, 4.0)) < 1e-13);
  CHECK_THROWS_AS(lower_incomplete_gamma(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(lower_incomplete_gamma(1.0, -1.0), DomainError);

  for (double s : {0.5, 1.0, 2.05, 3.1, 7.0})
    CHECK(lower_incomplete_gamma(s, 50.0 + 10.0 * s) / std::tgamma(s) > 1.0 - 1e-9);

  double previous = 0.0;
  for (double x = 0.0; x < 12.0; x += 0.5)
  {
    const double value = lower_incomplete_gamma(2.05, x);
    CHECK(value >= previous);
    CHECK(value <= std::tgamma(2.05));
    previous = value;
  }
}

TEST_CASE("eulerian: values, row sums, symmetry")
{
  CHECK(eulerian(1, 0) == 1);
  CHECK(eulerian(0, 0) == 1);
  CHECK(eulerian(3, 1) == 4);
  CHECK(eulerian(5, 2) == 66);
  CHECK(eulerian(4, 4) == 0);
  CHECK(eulerian(4, -1) == 0);
  CHECK_THROWS_AS(eulerian(21, 3), std::overflow_error);

  const auto table = oracle::eulerian_table(20);
  for (int n = 1; n <= 20; ++n)
  {
    unsigned long long row_sum = 0;
    for (int k = 0; k < n; ++k)
    {
      CHECK(eulerian(n, k) == table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
      CHECK(eulerian(n, k) == eulerian(n, n - 1 - k));
      row_sum += eulerian(n, k);
    }
    if (n <= 10)
    {
      unsigned long long factorial = 1;
      for (int i = 2; i <= n; ++i)
        factorial *= static_cast<unsigned long long>(i);
      CHECK(row_sum == factorial);
    }
  }
}

TEST_CASE("eulerian_over_factorial matches exact ratio")
{
  double factorial = 1.0;
  for (int n = 1; n <= 20; ++n)
  {
    factorial *= n;
    for (int k = 0; k < n; ++k)
      CHECK(rel_err(eulerian_over_factorial(n, k), static_cast<double>(eulerian(n, k)) / factorial) < 1e-13);
  }
}

TEST_CASE("sinc_power_integral: closed form")
{
  CHECK(sinc_power_integral(1) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(sinc_power_integral(2) == doctest::Approx(pi / 3).epsilon(1e-15));
  CHECK(sinc_power_integral(3) == doctest::Approx(11.0 * pi / 40.0).epsilon(1e-15));
  CHECK_THROWS_AS(sinc_power_integral(0), DomainError);
}

TEST_CASE("sinc_power_integral against oscillatory quadrature, p = 1..6")
{
  for (int p = 1; p <= 6; ++p)
    CHECK(std::abs(sinc_power_integral(p) - oracle::sinc_power_quadrature(2.0 * p, 2000)) < 1e-6);
}

TEST_CASE("xi: limits, monotonicity and two quadrature schemes")
{
  CHECK(std::abs(xi(2.001) - pi / 2) < 1e-2);
  const double xi21 = xi(2.1);
  const double xi22 = xi(2.2);
  CHECK(xi22 > xi21);
  CHECK(std::abs(xi21 - oracle::sinc_power_quadrature(4.0 / 2.1, 4000)) < 1e-6);
  CHECK(std::abs(xi21 - oracle::sinc_power_tanh_sinh(4.0 / 2.1, 500)) < 1e-6);
  CHECK(std::abs(xi22 - oracle::sinc_power_quadrature(4.0 / 2.2, 4000)) < 1e-6);
  CHECK(xi(2.1) == xi21); // memoized
  CHECK_THROWS_AS(xi(2.0), DomainError);
  CHECK_THROWS_AS(xi(3.0), DomainError);
}

TEST_CASE("falling_factorial")
{
  CHECK(falling_factorial(0.9, 0) == 1.0);
  CHECK(falling_factorial(3.0, 3) == 6.0);
  CHECK(falling_factorial(0.95, 2) == doctest::Approx(-0.0475).epsilon(1e-14));
}

TEST_CASE("hyp2f1_neg")
{
  CHECK(hyp2f1_neg(0.3, 1.7, 2.2, 0.0) == 1.0);
  CHECK(hyp2f1_neg(1.0, 1.0, 2.0, -1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(rel_err(hyp2f1_neg(0.5, 3.0, 1.05, -10.0), oracle::hyp2f1_pfaff_series(0.5, 3.0, 1.05, -10.0)) < 1e-13);
  for (double z : {-0.2, -3.0, -40.0})
    CHECK(hyp2f1_neg(1.0, 1.0, 2.0, z) == doctest::Approx(-std::log1p(-z) / z).epsilon(1e-13));
  CHECK_THROWS_AS(hyp2f1_neg(1.0, 1.0, 2.0, 0.5), DomainError);
  CHECK_THROWS_AS(hyp2f1_neg(1.0, 1.0, -2.0, -0.5), DomainError);
  CHECK_THROWS_AS(hyp2f1_neg(0.5, 3.0, 1.05, -1e6, SeriesBudget{100, 1e-15}), ConvergenceError);
}

TEST_CASE("hyp3f2_J: origin and direct series inside the unit disk")
{
  const double delta = 2.0 / 2.1;
  CHECK(hyp3f2_J(2, 3, delta, 0.0) == 1.0);
  for (int k = 0; k <= 4; ++k)
    for (int m = 1; m <= 5; ++m)
      for (double x : {-0.05, -0.5, -0.9})
      {
        const double expected = oracle::hyp3f2_series(k + 0.5, k - delta, k + m, k + 1.0, k + 1.0 - delta, x);
        CHECK(rel_err(hyp3f2_J(k, m, delta, x), expected) < 1e-7);
      }
  CHECK_THROWS_AS(hyp3f2_J(0, 3, delta, 0.1), DomainError);
}
