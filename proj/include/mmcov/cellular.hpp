#pragma once

#include "mmcov/kernel.hpp"
#include "mmcov/params.hpp"
#include "mmcov/quadrature.hpp"

#include <vector>

namespace mmcov::cellular
{

// Typical user served by the nearest LOS BS within R; cosine pattern.
struct CellularConfig
{
  double big_r = 200.0;
  double lambda_b = 1e-3;
  int n_t = 128;
  int m = 3;
  double alpha = 2.1;
  double spacing_ratio = 0.25;
  double p_t = 1.0;
  double beta_intercept = default_beta;
  double sigma2 = default_noise_watts;
  double tau = db_to_linear(5.0);

  void validate() const;

  double delta() const { return 2.0 / alpha; }
  // pi lambda_b R^2, the mean number of LOS BSs
  double los_mass() const;
  // 1 - e^{-pi lambda_b R^2}, probability that a LOS BS exists
  double los_probability() const;
};

// Outer serving-distance integral tolerance.
inline constexpr QuadratureSpec outer_spec{1e-9, 1e-7, 18};

/// c_k(r) at squared serving distance r, stored without the 1/N_t factor.
/// The k = 0 bracket uses J_0 - 1 so that c_0 -> 0 as tau -> 0, and the
/// noise term carries r_0^alpha = r^{1/delta}.
kernel::CoeffVector coeffs_cellular_cos(const CellularConfig& cfg, double r);

/// pi lambda_b int_0^{R^2} e^{-pi lambda_b r} ||exp(C_M(r) / N_t)||_1 dr.
double coverage_cellular(const CellularConfig& cfg, const QuadratureSpec& spec = outer_spec);

/// d_0 ... d_{M-1}: the serving-distance average of c_k(r) against
/// pi lambda_b e^{-pi lambda_b r}.
std::vector<double> coeffs_jensen(const CellularConfig& cfg, const QuadratureSpec& spec = outer_spec);

/// (1 - e^{-pi lambda_b R^2}) ||exp(D_M / (N_t (1 - e^{-pi lambda_b R^2})))||_1.
double coverage_cellular_lower(const CellularConfig& cfg, const QuadratureSpec& spec = outer_spec);

/// mu / N_t + e^{-pi lambda_b R^2} with mu = -sum d_n; ValidityError unless mu > 0.
double asymptotic_outage_cellular(const CellularConfig& cfg, const QuadratureSpec& spec = outer_spec);

} // namespace mmcov::cellular
