#pragma once

#include "mmcov/kernel.hpp"
#include "mmcov/params.hpp"

#include <vector>

namespace mmcov::adhoc
{

// Typical dipole pair at distance r_0; interferers form a PPP in the LOS ball.
struct AdHocConfig
{
  double r_0 = 25.0;   // m
  double big_r = 200.0; // LOS radius, m
  double lambda_b = 1e-3; // m^-2
  int n_t = 64;
  int m = 3; // Nakagami parameter
  double alpha = 2.1;
  double spacing_ratio = 0.25; // d / lambda
  double p_t = 1.0;            // W
  double beta_intercept = default_beta;
  double sigma2 = default_noise_watts; // W
  double tau = db_to_linear(5.0);      // linear SINR threshold

  void validate() const;

  double delta() const { return 2.0 / alpha; }
  double s() const { return m * tau * std::pow(r_0, alpha); }
  double sigma_n2() const { return sigma2 / (beta_intercept * p_t * n_t); }
};

struct SeriesControl
{
  int max_terms = 40;
  double stop_rel = 1e-12;

  void validate() const;
};

/// Sinc-pattern coefficients, without the 1/N_t argument scaling. Requires
/// tau (r_0/R)^alpha < 1 for the Eulerian p-series.
kernel::CoeffVector coeffs_adhoc_sinc(const AdHocConfig& cfg, const SeriesControl& ctl = {});

/// ||exp(C_M / N_t)||_1, the tight lower bound reported as the analytic coverage.
double coverage_adhoc(const AdHocConfig& cfg, const SeriesControl& ctl = {});

// e^{c_0 t} (1 + sum_n beta_n t^n) with t = 1/N_t.
struct PolyForm
{
  double c0 = 0.0;
  std::vector<double> betas;

  double evaluate(double t) const;
};

PolyForm coverage_poly_form(const AdHocConfig& cfg, const SeriesControl& ctl = {});

/// mu / N_t with mu = -sum c_n; ValidityError unless mu > 0.
double asymptotic_outage_adhoc(const AdHocConfig& cfg, const SeriesControl& ctl = {});

} // namespace mmcov::adhoc
