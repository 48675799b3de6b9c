#include "mmcov/adhoc.hpp"

#include "mmcov/errors.hpp"
#include "mmcov/specfun.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mmcov::adhoc
{

using std::numbers::pi;

void AdHocConfig::validate() const
{
  if (!(r_0 > 0.0) || !(big_r > 0.0))
    throw ConfigError("r_0 and R must be positive");
  if (r_0 > big_r)
    throw ConfigError("the dipole distance r_0 must not exceed the LOS radius R");
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

void SeriesControl::validate() const
{
  if (max_terms < 5)
    throw ConfigError("series max_terms must be >= 5");
  if (!(stop_rel > 0.0))
    throw ConfigError("series stop_rel must be positive");
}

namespace
{

// sum_{p >= max(1,k)} (-x)^p <2p-1,p-1>/(2p-1)! Gamma(M+p) / (Gamma(M) (p-k)! (p-delta))
double eulerian_series(int k, int m, double delta, double x, const SeriesControl& ctl)
{
  if (x == 0.0)
    return 0.0;
  const int first = std::max(1, k);
  const double log_x = std::log(x);
  double sum = 0.0;
  for (int p = first; p < first + ctl.max_terms; ++p)
  {
    const double log_mag = p * log_x + std::log(specfun::eulerian_over_factorial(2 * p - 1, p - 1)) +
                           std::lgamma(m + p) - std::lgamma(m) - std::lgamma(p - k + 1.0) - std::log(p - delta);
    const double term = (p % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
    sum += term;
    if (p > first && std::abs(term) <= ctl.stop_rel * std::abs(sum))
      return sum;
  }
  std::ostringstream os;
  os << "ad hoc coefficient series for k = " << k << " did not reach " << ctl.stop_rel << " within "
     << ctl.max_terms << " terms (ratio tau (r_0/R)^alpha = " << x << ")";
  throw ConvergenceError(os.str());
}

} // namespace

kernel::CoeffVector coeffs_adhoc_sinc(const AdHocConfig& cfg, const SeriesControl& ctl)
{
  cfg.validate();
  ctl.validate();
  const double delta = cfg.delta();
  const double x = cfg.tau * std::pow(cfg.r_0 / cfg.big_r, cfg.alpha);
  if (!(x < 1.0))
  {
    std::ostringstream os;
    os << "ad hoc series needs tau (r_0/R)^alpha < 1, got " << x;
    throw DomainError(os.str());
  }

  const double wavelength_over_spacing = 1.0 / cfg.spacing_ratio;
  const double series_scale = pi * cfg.big_r * cfg.big_r * cfg.lambda_b * wavelength_over_spacing / cfg.alpha;
  const double xi_scale = -delta * cfg.lambda_b * wavelength_over_spacing * std::tgamma(-delta) *
                          std::exp(std::lgamma(cfg.m + delta) - std::lgamma(cfg.m)) * std::pow(cfg.tau, delta) *
                          cfg.r_0 * cfg.r_0 * (cfg.tau > 0.0 ? specfun::xi(cfg.alpha) : 0.0);
  const double noise = cfg.tau * cfg.m * std::pow(cfg.r_0, cfg.alpha) * cfg.sigma2 / (cfg.beta_intercept * cfg.p_t);

  kernel::CoeffVector cv;
  cv.m = cfg.m;
  cv.s = cfg.s();
  cv.c.resize(static_cast<std::size_t>(cfg.m));
  double k_factorial = 1.0;
  for (int k = 0; k < cfg.m; ++k)
  {
    if (k > 0)
      k_factorial *= k;
    double bracket = series_scale * eulerian_series(k, cfg.m, delta, x, ctl) +
                     xi_scale * specfun::falling_factorial(delta, k);
    if (k <= 1)
      bracket += noise;
    cv.c[static_cast<std::size_t>(k)] = bracket * (k % 2 == 0 ? -1.0 : 1.0) / k_factorial;
  }
  cv.validate();
  return cv;
}

double coverage_adhoc(const AdHocConfig& cfg, const SeriesControl& ctl)
{
  return kernel::coverage_from_coeffs(coeffs_adhoc_sinc(cfg, ctl).scaled(1.0 / cfg.n_t));
}

double PolyForm::evaluate(double t) const
{
  double poly = 1.0;
  double power = 1.0;
  for (double b : betas)
  {
    power *= t;
    poly += b * power;
  }
  return std::exp(c0 * t) * poly;
}

PolyForm coverage_poly_form(const AdHocConfig& cfg, const SeriesControl& ctl)
{
  const auto cv = coeffs_adhoc_sinc(cfg, ctl);
  return {cv.c[0], kernel::nilpotent_norm_coeffs(cv)};
}

double asymptotic_outage_adhoc(const AdHocConfig& cfg, const SeriesControl& ctl)
{
  const auto cv = coeffs_adhoc_sinc(cfg, ctl);
  double mu = 0.0;
  for (double v : cv.c)
    mu -= v;
  if (!(mu > 0.0))
  {
    std::ostringstream os;
    os << "asymptotic slope mu = " << mu << " must be positive";
    throw ValidityError(os.str());
  }
  return mu / cfg.n_t;
}

} // namespace mmcov::adhoc
