#pragma once

#include "mmcov/adhoc.hpp"
#include "mmcov/antenna.hpp"
#include "mmcov/cellular.hpp"
#include "mmcov/params.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mmcov::montecarlo
{

struct SimControl
{
  long trials = 100000;
  std::uint64_t seed = 1;
  bool include_nlos = false;
  double nlos_alpha = default_nlos_alpha;
  double nlos_beta = default_nlos_beta;
  double nlos_outer_radius = 0.0; // 0 selects 4 R
  int threads = 0;                // 0 selects hardware concurrency

  void validate(double big_r) const;
  double outer_radius(double big_r) const { return nlos_outer_radius > 0.0 ? nlos_outer_radius : 4.0 * big_r; }
};

struct McEstimate
{
  double p_hat = 0.0;
  double stderr = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
};

enum class Metric
{
  Sinr,
  Sir, // noise dropped
  Snr  // interference dropped
};

using Rng = std::mt19937_64;

// Independent substream for (seed, trial, stream); the result depends only
// on these three values, never on scheduling.
Rng substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

/// Radii of a PPP of density lambda_b restricted to r_min <= r <= r_max.
std::vector<double> sample_ppp_annulus(double lambda_b, double r_min, double r_max, Rng& rng);

/// Gamma(M, 1/M) power gain.
double nakagami_power(int m, Rng& rng);

McEstimate simulate_adhoc(const adhoc::AdHocConfig& cfg, antenna::PatternKind pattern, const SimControl& ctl,
                          Metric metric = Metric::Sinr);

McEstimate simulate_cellular(const cellular::CellularConfig& cfg, antenna::PatternKind pattern,
                             const SimControl& ctl, Metric metric = Metric::Sinr);

// Density sweeps on one coupled realization per trial: points are drawn at
// the largest density and independently thinned, so coverage at nearby
// densities is positively correlated. `densities` must be strictly
// increasing; cfg.lambda_b is ignored.
std::vector<McEstimate> simulate_adhoc_density(const adhoc::AdHocConfig& cfg, antenna::PatternKind pattern,
                                               const std::vector<double>& densities, const SimControl& ctl,
                                               Metric metric = Metric::Sinr);

std::vector<McEstimate> simulate_cellular_density(const cellular::CellularConfig& cfg, antenna::PatternKind pattern,
                                                  const std::vector<double>& densities, const SimControl& ctl,
                                                  Metric metric = Metric::Sinr);

} // namespace mmcov::montecarlo
