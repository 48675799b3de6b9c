#pragma once

#include "mmcov/antenna.hpp"
#include "mmcov/quadrature.hpp"

#include <vector>

namespace mmcov::kernel
{

// First column {c_0 ... c_{M-1}} of the lower-triangular Toeplitz exponent,
// together with the Laplace variable s it was generated for.
struct CoeffVector
{
  std::vector<double> c;
  double s = 0.0;
  int m = 1;

  // c_0 <= tol and c_k >= -tol for k >= 1, tol = 1e-9. Throws ValidityError.
  void validate() const;

  // Same vector with every entry multiplied by t (the 1/N_t argument scaling).
  CoeffVector scaled(double t) const;
};

/// First column of exp(C_M) by the O(M^2) recursion
/// x_0 = e^{c_0}, x_n = sum_{i<n} ((n-i)/n) c_{n-i} x_i.
std::vector<double> ltt_exp_first_column(const CoeffVector& cv);

/// Induced l1-norm of exp(C_M), i.e. the coverage value. Overshoot above 1 up
/// to 1e-6 is clamped and reported through `clamped`; beyond that the
/// coefficients are considered broken and ValidityError is thrown.
double coverage_from_coeffs(const CoeffVector& cv, bool* clamped = nullptr);

/// beta_n = ||(C_M - c_0 I)^n||_1 / n! for n = 1 .. M-1 (empty when M = 1).
std::vector<double> nilpotent_norm_coeffs(const CoeffVector& cv);

// Law of the interferer gain g as seen by the Laplace exponent.
class GainDistribution
{
public:
  virtual ~GainDistribution() = default;

  // E_g[g^k E_q(a g)], a >= 0.
  virtual double mixed_moment(int k, double q, double a) const = 0;

  // E_g[g^p], p >= 0.
  virtual double plain_moment(double p) const = 0;
};

// g identically equal to `value`.
class PointMassGain final : public GainDistribution
{
public:
  explicit PointMassGain(double value, QuadratureSpec spec = {});

  double mixed_moment(int k, double q, double a) const override;
  double plain_moment(double p) const override;

private:
  double value_;
  QuadratureSpec spec_;
};

// g = |rho|^2 G(d/lambda * theta), |rho|^2 ~ Gamma(M, 1/M), theta ~ U[-1, 1].
// The fading expectation is taken through the Gamma moment generating
// function, leaving one smooth integral; theta is integrated adaptively
// between the pattern nulls. Immutable after construction.
class PatternGainDistribution final : public GainDistribution
{
public:
  PatternGainDistribution(antenna::AntennaPattern pattern, int fading_m, QuadratureSpec spec = {});

  double mixed_moment(int k, double q, double a) const override;
  double plain_moment(double p) const override;

  const antenna::AntennaPattern& pattern() const { return pattern_; }
  int fading_m() const { return m_; }

private:
  // E over theta in [0, 1] of h(G(d/lambda * theta)).
  double theta_expectation(const Integrand& h) const;

  antenna::AntennaPattern pattern_;
  int m_;
  QuadratureSpec spec_;
  std::vector<double> breaks_; // segment ends in theta, last = 1
};

/// Coefficients of the Laplace exponent for interferers in the annulus
/// [kappa, R] and normalized noise sigma_n2. kappa = 0 drops the inner terms.
CoeffVector coeffs_general(const GainDistribution& gd, double s, double kappa, double big_r, double lambda_b,
                           double sigma_n2, double alpha, int m);

} // namespace mmcov::kernel
