#include "mmcov/specfun.hpp"

#include "mmcov/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mmcov::specfun
{

using std::numbers::pi;

double gen_exp_integral(double p, double z, const QuadratureSpec& spec)
{
  if (!(z >= 0.0))
    throw DomainError("gen_exp_integral: z must be >= 0");
  if (z == 0.0)
  {
    if (p <= 1.0)
      throw DomainError("gen_exp_integral: E_p(0) diverges for p <= 1");
    return 1.0 / (p - 1.0);
  }
  // t = 1 + u/z maps the integral onto [0, inf) with an O(1) decay scale.
  const auto integrand = [p, z](double u) { return std::exp(-p * std::log1p(u / z) - u); };
  const double tail = integrate_to_infinity(integrand, 0.0, spec);
  return std::exp(-z) / z * tail;
}

double lower_incomplete_gamma(double s, double x)
{
  if (!(s > 0.0))
    throw DomainError("lower_incomplete_gamma: s must be > 0");
  if (!(x >= 0.0))
    throw DomainError("lower_incomplete_gamma: x must be >= 0");
  if (x == 0.0)
    return 0.0;
  return boost::math::tgamma_lower(s, x);
}

std::uint64_t eulerian(int n, int k)
{
  if (n < 0)
    throw DomainError("eulerian: n must be >= 0");
  if (n == 0)
    return k == 0 ? 1 : 0;
  if (k < 0 || k >= n)
    return 0;
  if (n > 20)
    throw std::overflow_error("eulerian: <n, k> exceeds 64 bits for n > 20");

  __int128 sum = 0;
  __int128 binom = 1; // C(n+1, j)
  for (int j = 0; j <= k + 1; ++j)
  {
    __int128 power = 1;
    for (int i = 0; i < n; ++i)
      power *= (k - j + 1);
    sum += (j % 2 == 0 ? 1 : -1) * binom * power;
    binom = binom * (n + 1 - j) / (j + 1);
  }
  return static_cast<std::uint64_t>(sum);
}

double eulerian_over_factorial(int n, int k)
{
  if (n < 0)
    throw DomainError("eulerian_over_factorial: n must be >= 0");
  if (n == 0)
    return k == 0 ? 1.0 : 0.0;
  if (k < 0 || k >= n)
    return 0.0;
  // <n,k>/n! = ((k+1) <n-1,k>/(n-1)! + (n-k) <n-1,k-1>/(n-1)!) / n
  std::vector<double> row{1.0};
  for (int level = 1; level <= n; ++level)
  {
    std::vector<double> next(static_cast<std::size_t>(level), 0.0);
    for (int j = 0; j < level; ++j)
    {
      const double same = j < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(j)] : 0.0;
      const double prev = j >= 1 && j - 1 < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(j - 1)] : 0.0;
      next[static_cast<std::size_t>(j)] = ((j + 1) * same + (level - j) * prev) / level;
    }
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(k)];
}

double sinc_power_integral(int p)
{
  if (p < 1)
    throw DomainError("sinc_power_integral: p must be >= 1");
  return 0.5 * pi * eulerian_over_factorial(2 * p - 1, p - 1);
}

namespace
{

// Hurwitz zeta(s, a) for s > 1 and a >= 1 by Euler-Maclaurin summation.
double hurwitz_zeta(double s, double a)
{
  constexpr std::array<double, 6> b2m{1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0};
  constexpr int direct = 8;
  double sum = 0.0;
  for (int n = 0; n < direct; ++n)
    sum += std::pow(a + n, -s);
  const double x = a + direct;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double rising = s; // s (s+1) ... (s+2m-2)
  double factorial = 2.0;
  for (std::size_t m = 1; m <= b2m.size(); ++m)
  {
    sum += b2m[m - 1] / factorial * rising * std::pow(x, -s - 2.0 * m + 1.0);
    rising *= (s + 2.0 * m - 1.0) * (s + 2.0 * m);
    factorial *= (2.0 * m + 1.0) * (2.0 * m + 2.0);
  }
  return sum;
}

double abs_sinc_power(double x, double q)
{
  if (std::abs(x) < 1e-8)
    return 1.0;
  return std::pow(std::abs(std::sin(x) / x), q);
}

double compute_xi(double alpha, const QuadratureSpec& spec)
{
  const double q = 4.0 / alpha;
  constexpr int segments = 64;

  double head = 0.0;
  for (int n = 0; n < segments; ++n)
    head += integrate_singular([q](double x) { return abs_sinc_power(x, q); }, n * pi, (n + 1) * pi, spec);

  // Tail sum over periods n >= segments of int_0^pi sin^q(u) (n pi + u)^{-q} du,
  // expanded binomially in u / (n pi) and summed with the Hurwitz zeta.
  constexpr int orders = 12;
  double tail = 0.0;
  double binom = 1.0; // C(-q, j)
  for (int j = 0; j < orders; ++j)
  {
    const double moment = integrate_singular(
        [q, j](double u) { return std::pow(std::sin(u), q) * std::pow(u, j); }, 0.0, pi, spec);
    tail += binom * moment * std::pow(pi, -q - j) * hurwitz_zeta(q + j, segments);
    binom *= (-q - j) / (j + 1.0);
  }

  const double x_end = segments * pi;
  const double envelope = std::pow(x_end, 1.0 - q) / (q - 1.0);
  if (!(tail > 0.0) || tail > envelope)
    throw ValidityError("xi: tail estimate outside its envelope bound");
  return head + tail;
}

} // namespace

double xi(double alpha, const QuadratureSpec& spec)
{
  if (!(alpha > 2.0 && alpha < 3.0))
    throw DomainError("xi: alpha must lie in (2, 3)");

  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(alpha); it != cache.end())
      return it->second;
  }
  const double value = compute_xi(alpha, spec);
  std::lock_guard lock(mutex);
  cache.emplace(alpha, value);
  return value;
}

double falling_factorial(double x, int n)
{
  if (n < 0)
    throw DomainError("falling_factorial: n must be >= 0");
  double product = 1.0;
  for (int i = 0; i < n; ++i)
    product *= x - i;
  return product;
}

double hyp2f1_neg(double a, double b, double c, double z, const SeriesBudget& budget)
{
  if (!(z <= 0.0))
    throw DomainError("hyp2f1_neg: z must be <= 0");
  if (c <= 0.0 && c == std::floor(c))
    throw DomainError("hyp2f1_neg: c must not be a non-positive integer");
  if (z == 0.0)
    return 1.0;

  // Pfaff: 2F1(a,b;c;z) = (1-z)^{-b} 2F1(c-a, b; c; w), w = z/(z-1) in (0,1).
  const double w = z / (z - 1.0);
  const double shifted = c - a;
  double term = 1.0;
  double sum = 1.0;
  for (long n = 0; n < budget.max_terms; ++n)
  {
    const double ratio = (shifted + n) * (b + n) / ((c + n) * (n + 1.0)) * w;
    term *= ratio;
    sum += term;
    if (term == 0.0)
      return std::pow(1.0 - z, -b) * sum;
    const double rho = std::max(std::abs(ratio), w);
    if (rho < 1.0 && std::abs(term) * rho / (1.0 - rho) <= budget.rel_tol * std::abs(sum))
      return std::pow(1.0 - z, -b) * sum;
  }
  std::ostringstream os;
  os << "hyp2f1_neg: series did not converge within " << budget.max_terms << " terms (z = " << z << ")";
  throw ConvergenceError(os.str());
}

double hyp3f2_J(int k, int m, double delta, double x, const QuadratureSpec& spec)
{
  if (k < 0 || m < 1)
    throw DomainError("hyp3f2_J: need k >= 0 and M >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw DomainError("hyp3f2_J: delta must lie in (0, 1)");
  if (!(x <= 0.0))
    throw DomainError("hyp3f2_J: x must be <= 0");
  if (x == 0.0)
    return 1.0;

  // Euler integral over t = sin^2(phi):
  // J_k(x) = 2 Gamma(k+1) / (Gamma(k+1/2) sqrt(pi)) int_0^{pi/2} sin^{2k} phi
  //          2F1(k-delta, k+M; k+1-delta; x sin^2 phi) dphi
  const double a = k - delta;
  const double b = k + m;
  const double c = k + 1.0 - delta;
  const auto integrand = [=](double phi) {
    const double s2 = std::sin(phi) * std::sin(phi);
    return std::pow(s2, k) * hyp2f1_neg(a, b, c, x * s2);
  };
  const double prefactor = 2.0 * std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 0.5)) / std::sqrt(pi);
  return prefactor * integrate(integrand, 0.0, 0.5 * pi, spec);
}

} // namespace mmcov::specfun
