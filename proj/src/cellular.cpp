#include "mmcov/cellular.hpp"

#include "mmcov/errors.hpp"
#include "mmcov/specfun.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mmcov::cellular
{

using std::numbers::pi;

void CellularConfig::validate() const
{
  if (!(big_r > 0.0))
    throw ConfigError("LOS radius R must be positive");
  if (!(lambda_b > 0.0))
    throw ConfigError("density lambda_b must be positive");
  if (n_t < 1)
    throw ConfigError("N_t must be >= 1");
  if (m < 1)
    throw ConfigError("M must be >= 1");
  if (!(alpha > 2.0 && alpha < 3.0))
    throw ConfigError("alpha must lie in (2, 3)");
  if (!(spacing_ratio > 0.0 && spacing_ratio <= 0.5))
    throw ConfigError("spacing ratio d/lambda must lie in (0, 0.5]");
  if (!(p_t > 0.0) || !(beta_intercept > 0.0))
    throw ConfigError("P_t and beta must be positive");
  if (!(sigma2 >= 0.0))
    throw ConfigError("noise power must be >= 0");
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw ConfigError("threshold tau must be finite and >= 0");
}

double CellularConfig::los_mass() const
{
  return pi * lambda_b * big_r * big_r;
}

double CellularConfig::los_probability() const
{
  return -std::expm1(-los_mass());
}

namespace
{

// 2 sqrt(pi) lambda_b (lambda/d) Gamma(k+1/2) Gamma(M+k) tau^k / ((k!)^2 (alpha k - 2) Gamma(M))
double prefactor(const CellularConfig& cfg, int k)
{
  const double log_mag = std::lgamma(k + 0.5) + std::lgamma(cfg.m + k) - std::lgamma(cfg.m) -
                         2.0 * std::lgamma(k + 1.0) + (k > 0 ? k * std::log(cfg.tau) : 0.0);
  return 2.0 * std::sqrt(pi) * cfg.lambda_b / cfg.spacing_ratio * std::exp(log_mag) / (cfg.alpha * k - 2.0);
}

// M tau sigma^2 / (beta P_t), the noise weight before the r_0^alpha factor.
double noise_weight(const CellularConfig& cfg)
{
  return cfg.m * cfg.tau * cfg.sigma2 / (cfg.beta_intercept * cfg.p_t);
}

double j_minus_indicator(const CellularConfig& cfg, int k, double x)
{
  const double j = specfun::hyp3f2_J(k, cfg.m, cfg.delta(), x);
  return k == 0 ? j - 1.0 : j;
}

std::vector<double> j_at_tau(const CellularConfig& cfg)
{
  std::vector<double> out(static_cast<std::size_t>(cfg.m));
  for (int k = 0; k < cfg.m; ++k)
    out[static_cast<std::size_t>(k)] = j_minus_indicator(cfg, k, -cfg.tau);
  return out;
}

kernel::CoeffVector coeffs_at(const CellularConfig& cfg, double r, const std::vector<double>& j_tau)
{
  const double delta = cfg.delta();
  const double r2 = cfg.big_r * cfg.big_r;
  const double ratio = r / r2; // (r_0 / R)^2
  const double r0_alpha = std::pow(r, 1.0 / delta);

  kernel::CoeffVector cv;
  cv.m = cfg.m;
  cv.s = cfg.m * cfg.tau * r0_alpha;
  cv.c.assign(static_cast<std::size_t>(cfg.m), 0.0);
  if (cfg.tau == 0.0)
    return cv;
  for (int k = 0; k < cfg.m; ++k)
  {
    // R^{2-alpha k} r^{k/delta} = r (r/R^2)^{k/delta - 1}
    const double far = j_minus_indicator(cfg, k, -cfg.tau * std::pow(ratio, 1.0 / delta));
    const double bracket =
        r > 0.0 ? r * (j_tau[static_cast<std::size_t>(k)] - far * std::pow(ratio, k / delta - 1.0)) : 0.0;
    double ck = prefactor(cfg, k) * bracket;
    if (k <= 1)
      ck += (k == 0 ? -1.0 : 1.0) * noise_weight(cfg) * r0_alpha;
    cv.c[static_cast<std::size_t>(k)] = ck;
  }
  cv.validate();
  return cv;
}

// int_0^A f(v) e^{-v} dv split at v = 1.
double weighted_v_integral(const Integrand& f, double big_a, const QuadratureSpec& spec)
{
  const auto g = [&](double v) { return std::exp(-v) * f(v); };
  double sum = integrate(g, 0.0, std::min(1.0, big_a), spec);
  if (big_a > 1.0)
    sum += integrate(g, 1.0, big_a, spec);
  return sum;
}

} // namespace

kernel::CoeffVector coeffs_cellular_cos(const CellularConfig& cfg, double r)
{
  cfg.validate();
  if (!(r >= 0.0 && r <= cfg.big_r * cfg.big_r))
    throw DomainError("squared serving distance r must lie in [0, R^2]");
  return coeffs_at(cfg, r, j_at_tau(cfg));
}

double coverage_cellular(const CellularConfig& cfg, const QuadratureSpec& spec)
{
  cfg.validate();
  spec.validate();
  const double rate = pi * cfg.lambda_b;
  const auto j_tau = j_at_tau(cfg);
  const double t = 1.0 / cfg.n_t;
  const auto integrand = [&](double v) {
    const double r = std::min(v / rate, cfg.big_r * cfg.big_r);
    return kernel::coverage_from_coeffs(coeffs_at(cfg, r, j_tau).scaled(t));
  };
  return weighted_v_integral(integrand, cfg.los_mass(), spec);
}

std::vector<double> coeffs_jensen(const CellularConfig& cfg, const QuadratureSpec& spec)
{
  cfg.validate();
  spec.validate();
  const double delta = cfg.delta();
  const double big_a = cfg.los_mass();
  const double tail = std::exp(-big_a);
  const double rate = pi * cfg.lambda_b;

  std::vector<double> d(static_cast<std::size_t>(cfg.m), 0.0);
  if (cfg.tau == 0.0)
    return d;
  for (int k = 0; k < cfg.m; ++k)
  {
    const double j_tau = specfun::hyp3f2_J(k, cfg.m, delta, -cfg.tau);
    double y = j_tau * (1.0 - tail * (1.0 + big_a));
    if (k == 0)
      y += big_a + std::expm1(-big_a);

    // (pi lambda_b)^2 R^{2-alpha k} int_0^{R^2} e^{-pi lambda_b r} r^{k/delta} J_k dr
    // = A^{1-k/delta} int_0^A e^{-v} v^{k/delta} J_k(-tau (v/A)^{1/delta}) dv
    const auto f = [&](double v) {
      return std::pow(v, k / delta) * specfun::hyp3f2_J(k, cfg.m, delta, -cfg.tau * std::pow(v / big_a, 1.0 / delta));
    };
    const double far = std::pow(big_a, 1.0 - k / delta) * weighted_v_integral(f, big_a, spec);

    double dk = prefactor(cfg, k) / rate * (y - far);
    if (k <= 1)
      dk += (k == 0 ? -1.0 : 1.0) * noise_weight(cfg) * std::pow(rate, -1.0 / delta) *
            specfun::lower_incomplete_gamma(1.0 + 1.0 / delta, big_a);
    d[static_cast<std::size_t>(k)] = dk;
  }
  return d;
}

double coverage_cellular_lower(const CellularConfig& cfg, const QuadratureSpec& spec)
{
  const auto d = coeffs_jensen(cfg, spec);
  const double p_los = cfg.los_probability();
  kernel::CoeffVector cv;
  cv.m = cfg.m;
  cv.c = d;
  cv.validate();
  return p_los * kernel::coverage_from_coeffs(cv.scaled(1.0 / (cfg.n_t * p_los)));
}

double asymptotic_outage_cellular(const CellularConfig& cfg, const QuadratureSpec& spec)
{
  double mu = 0.0;
  for (double v : coeffs_jensen(cfg, spec))
    mu -= v;
  if (!(mu > 0.0))
  {
    std::ostringstream os;
    os << "asymptotic slope mu = " << mu << " must be positive";
    throw ValidityError(os.str());
  }
  return mu / cfg.n_t + std::exp(-cfg.los_mass());
}

} // namespace mmcov::cellular
