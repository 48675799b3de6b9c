#include "mmcov/kernel.hpp"

#include "mmcov/errors.hpp"
#include "mmcov/specfun.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mmcov::kernel
{

using std::numbers::pi;

namespace
{
constexpr double sign_tol = 1e-9;
constexpr double clamp_tol = 1e-6;
} // namespace

void CoeffVector::validate() const
{
  if (m < 1 || c.size() != static_cast<std::size_t>(m))
    throw ValidityError("coefficient vector length must equal M >= 1");
  if (!(s >= 0.0))
    throw ValidityError("Laplace variable s must be >= 0");
  for (double v : c)
    if (!std::isfinite(v))
      throw ValidityError("non-finite coefficient");
  if (c[0] > sign_tol)
  {
    std::ostringstream os;
    os << "c_0 = " << c[0] << " must be <= 0";
    throw ValidityError(os.str());
  }
  for (std::size_t k = 1; k < c.size(); ++k)
    if (c[k] < -sign_tol)
    {
      std::ostringstream os;
      os << "c_" << k << " = " << c[k] << " must be >= 0";
      throw ValidityError(os.str());
    }
}

CoeffVector CoeffVector::scaled(double t) const
{
  CoeffVector out = *this;
  for (double& v : out.c)
    v *= t;
  return out;
}

std::vector<double> ltt_exp_first_column(const CoeffVector& cv)
{
  const std::size_t m = cv.c.size();
  std::vector<double> x(m, 0.0);
  if (m == 0)
    return x;
  x[0] = std::exp(cv.c[0]);
  for (std::size_t n = 1; n < m; ++n)
  {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sum += static_cast<double>(n - i) * cv.c[n - i] * x[i];
    x[n] = sum / static_cast<double>(n);
  }
  return x;
}

double coverage_from_coeffs(const CoeffVector& cv, bool* clamped)
{
  cv.validate();
  double total = 0.0;
  for (double v : ltt_exp_first_column(cv))
    total += std::abs(v);
  if (clamped)
    *clamped = false;
  if (total > 1.0)
  {
    if (total - 1.0 > clamp_tol)
    {
      std::ostringstream os;
      os << "coverage " << total << " exceeds 1 beyond tolerance; coefficient series is unreliable";
      throw ValidityError(os.str());
    }
    if (clamped)
      *clamped = true;
    total = 1.0;
  }
  return total;
}

std::vector<double> nilpotent_norm_coeffs(const CoeffVector& cv)
{
  const std::size_t m = cv.c.size();
  if (m < 2)
    return {};
  std::vector<double> strict = cv.c;
  strict[0] = 0.0;

  std::vector<double> betas;
  betas.reserve(m - 1);
  std::vector<double> power = strict;
  double factorial = 1.0;
  for (std::size_t n = 1; n < m; ++n)
  {
    factorial *= static_cast<double>(n);
    double norm = 0.0;
    for (double v : power)
      norm += std::abs(v);
    betas.push_back(norm / factorial);

    // first column of the next power; entries below index n+1 vanish exactly
    std::vector<double> next(m, 0.0);
    for (std::size_t i = n + 1; i < m; ++i)
      for (std::size_t j = 1; j <= i - n; ++j)
        next[i] += strict[j] * power[i - j];
    power = std::move(next);
  }
  return betas;
}

PointMassGain::PointMassGain(double value, QuadratureSpec spec) : value_(value), spec_(spec)
{
  if (!(value_ >= 0.0))
    throw ConfigError("point-mass gain must be >= 0");
  spec_.validate();
}

double PointMassGain::mixed_moment(int k, double q, double a) const
{
  if (value_ == 0.0 && k >= 1)
    return 0.0;
  return std::pow(value_, k) * specfun::gen_exp_integral(q, a * value_, spec_);
}

double PointMassGain::plain_moment(double p) const
{
  if (p == 0.0)
    return 1.0;
  return std::pow(value_, p);
}

PatternGainDistribution::PatternGainDistribution(antenna::AntennaPattern pattern, int fading_m, QuadratureSpec spec)
    : pattern_(std::move(pattern)), m_(fading_m), spec_(spec)
{
  if (m_ < 1)
    throw ConfigError("Nakagami parameter M must be >= 1");
  spec_.validate();

  const auto& geometry = pattern_.geometry();
  const double nd = geometry.n_t * geometry.spacing_ratio;
  switch (pattern_.kind())
  {
  case antenna::PatternKind::Actual:
  case antenna::PatternKind::Sinc:
    for (int j = 1; j / nd < 1.0; ++j)
      breaks_.push_back(j / nd);
    break;
  case antenna::PatternKind::Cosine:
    if (1.0 / nd < 1.0)
      breaks_.push_back(1.0 / nd);
    break;
  case antenna::PatternKind::FlatTop:
  {
    const double edge = 0.5 * antenna::flat_top_params(geometry).hpbw / geometry.spacing_ratio;
    if (edge < 1.0)
      breaks_.push_back(edge);
    break;
  }
  }
  breaks_.push_back(1.0);
}

double PatternGainDistribution::theta_expectation(const Integrand& h) const
{
  const double ratio = pattern_.geometry().spacing_ratio;
  const auto integrand = [&](double theta) { return h(pattern_.gain(ratio * theta)); };
  double total = 0.0;
  double left = 0.0;
  for (double right : breaks_)
  {
    total += integrate(integrand, left, right, spec_);
    left = right;
  }
  return total;
}

double PatternGainDistribution::mixed_moment(int k, double q, double a) const
{
  if (k < 0 || !(a >= 0.0))
    throw DomainError("mixed_moment: need k >= 0 and a >= 0");
  const double nu = m_ + k;
  if (!(q + nu > 1.0))
    throw DomainError("mixed_moment: fading expectation diverges for q + M + k <= 1");
  // E[rho^k] for rho ~ Gamma(M, 1/M)
  const double rho_moment = std::exp(std::lgamma(nu) - std::lgamma(m_) - k * std::log(static_cast<double>(m_)));

  // E_rho[rho^k E_q(b rho)] = E[rho^k] I(b/M), I(c) = int_1^inf t^{-q} (1 + c t)^{-(M+k)} dt.
  // For c < 1 the integrand turns over at t = 1/c; in y = ln t the integral splits
  // there, and the far piece no longer depends on c.
  const auto far = [&] {
    const auto f = [&](double y) { return std::exp((1.0 - q) * y - nu * std::log1p(std::exp(y))); };
    return integrate_to_infinity(f, 0.0, spec_);
  };
  double far_piece = -1.0; // computed on first use

  const auto fading = [&](double gamma) {
    if (gamma == 0.0 || a == 0.0)
    {
      if (k >= 1 && gamma == 0.0)
        return 0.0;
      return std::pow(gamma, k) * rho_moment * specfun::gen_exp_integral(q, 0.0);
    }
    const double c = a * gamma / m_;
    if (c >= 1.0)
    {
      const double w = c / (1.0 + c);
      const auto tail = [&](double u) { return std::exp(-q * std::log1p(u) - nu * std::log1p(w * u)); };
      const double value = integrate_to_infinity(tail, 0.0, spec_);
      return std::pow(gamma, k) * rho_moment * std::exp(-nu * std::log1p(c)) * value;
    }
    if (far_piece < 0.0)
      far_piece = far();
    const double y0 = -std::log(c);
    if (q >= 1.0)
    {
      const auto near = [&](double y) { return std::exp((1.0 - q) * y - nu * std::log1p(c * std::exp(y))); };
      const double value = integrate(near, 0.0, y0, spec_) + std::exp((1.0 - q) * y0) * far_piece;
      return std::pow(gamma, k) * rho_moment * value;
    }
    // q < 1: carry c^{q-1} analytically so nothing overflows as c -> 0
    const auto near = [&](double y) { return std::exp((1.0 - q) * (y - y0) - nu * std::log1p(c * std::exp(y))); };
    const double scaled = integrate(near, 0.0, y0, spec_) + far_piece;
    return rho_moment * std::exp(k * std::log(gamma) + (q - 1.0) * std::log(c)) * scaled;
  };
  return theta_expectation(fading);
}

double PatternGainDistribution::plain_moment(double p) const
{
  if (!(p >= 0.0))
    throw DomainError("plain_moment: order must be >= 0");
  if (p == 0.0)
    return 1.0;
  const double rho_moment = std::exp(std::lgamma(m_ + p) - std::lgamma(m_) - p * std::log(static_cast<double>(m_)));
  return rho_moment * theta_expectation([p](double gamma) { return std::pow(gamma, p); });
}

CoeffVector coeffs_general(const GainDistribution& gd, double s, double kappa, double big_r, double lambda_b,
                           double sigma_n2, double alpha, int m)
{
  if (m < 1)
    throw DomainError("coeffs_general: M must be >= 1");
  if (!(s >= 0.0))
    throw DomainError("coeffs_general: s must be >= 0");
  if (!(big_r > 0.0) || !(kappa >= 0.0 && kappa < big_r))
    throw DomainError("coeffs_general: need 0 <= kappa < R");
  if (!(alpha > 2.0 && alpha < 3.0))
    throw DomainError("coeffs_general: alpha must lie in (2, 3)");
  if (!(lambda_b >= 0.0) || !(sigma_n2 >= 0.0))
    throw DomainError("coeffs_general: density and noise must be >= 0");

  CoeffVector cv;
  cv.m = m;
  cv.s = s;
  cv.c.assign(static_cast<std::size_t>(m), 0.0);
  if (s == 0.0)
    return cv;

  const double delta = 2.0 / alpha;
  const double a_outer = s * std::pow(big_r, -alpha);
  const double a_inner = kappa > 0.0 ? s * std::pow(kappa, -alpha) : 0.0;

  double bracket = big_r * big_r - delta * big_r * big_r * gd.mixed_moment(0, 1.0 + delta, a_outer);
  if (kappa > 0.0)
    bracket += -kappa * kappa + delta * kappa * kappa * gd.mixed_moment(0, 1.0 + delta, a_inner);
  cv.c[0] = -s * sigma_n2 - pi * lambda_b * bracket;

  double s_pow_over_fact = 1.0; // s^k / k!
  for (int k = 1; k < m; ++k)
  {
    s_pow_over_fact *= s / k;
    const double q = 1.0 + delta - k;
    double term = std::pow(big_r, 2.0 - alpha * k) * gd.mixed_moment(k, q, a_outer);
    // kappa^{2 - alpha k} E[g^k E_q(s kappa^{-alpha} g)] -> 0 as kappa -> 0
    if (kappa > 0.0)
      term -= std::pow(kappa, 2.0 - alpha * k) * gd.mixed_moment(k, q, a_inner);
    cv.c[static_cast<std::size_t>(k)] = pi * delta * lambda_b * s_pow_over_fact * term;
  }
  if (m >= 2)
    cv.c[1] += s * sigma_n2;
  return cv;
}

} // namespace mmcov::kernel
