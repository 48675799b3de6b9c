#include "mmcov/montecarlo.hpp"

#include "mmcov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace mmcov::montecarlo
{

using std::numbers::pi;

void SimControl::validate(double big_r) const
{
  if (trials < 1)
    throw ConfigError("trials must be >= 1");
  if (threads < 0)
    throw ConfigError("threads must be >= 0");
  if (include_nlos)
  {
    if (!(outer_radius(big_r) > big_r))
      throw ConfigError("NLOS outer radius must exceed R");
    if (!(nlos_alpha > 0.0) || !(nlos_beta > 0.0))
      throw ConfigError("NLOS exponent and intercept must be positive");
  }
}

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// (0, 1]: keeps r > 0 when r_min = 0
double open_unit(Rng& rng)
{
  return 1.0 - std::generate_canonical<double, std::numeric_limits<double>::digits>(rng);
}

double radius_draw(double r_min, double r_max, Rng& rng)
{
  const double a = r_min * r_min;
  return std::sqrt(a + open_unit(rng) * (r_max * r_max - a));
}

enum Stream : std::uint64_t
{
  los_stream = 0,
  nlos_stream = 1,
  signal_stream = 2
};

struct Tier
{
  double r_min;
  double r_max;
  int fading_m;
  double pl_scale; // intercept relative to the LOS beta
  double alpha;
  Stream stream;
};

struct Setup
{
  antenna::AntennaPattern pattern;
  std::vector<double> densities;
  std::vector<Tier> tiers;
  bool cellular = false;
  int signal_m = 1;           // ad hoc only
  double signal_path = 0.0;   // ad hoc only, r_0^{-alpha}
  double noise = 0.0;
  double tau = 0.0;
  Metric metric = Metric::Sinr;
};

// Per-density-bucket accumulators for one trial; bucket j holds the points
// first admitted at densities[j].
struct Scratch
{
  std::vector<double> interference;
  std::vector<double> best_path;
  std::vector<double> best_signal;
  std::vector<double> best_contribution;

  explicit Scratch(std::size_t n) : interference(n), best_path(n), best_signal(n), best_contribution(n) {}

  void reset()
  {
    std::fill(interference.begin(), interference.end(), 0.0);
    std::fill(best_path.begin(), best_path.end(), -1.0);
    std::fill(best_signal.begin(), best_signal.end(), 0.0);
    std::fill(best_contribution.begin(), best_contribution.end(), 0.0);
  }
};

bool covered(const Setup& setup, double signal, double interference)
{
  switch (setup.metric)
  {
  case Metric::Sir:
    return signal > setup.tau * interference;
  case Metric::Snr:
    return signal > setup.tau * setup.noise;
  case Metric::Sinr:
    break;
  }
  return signal > setup.tau * (setup.noise + interference);
}

void run_trial(const Setup& setup, std::uint64_t seed, std::uint64_t trial, Scratch& scratch,
               std::vector<long>& successes)
{
  const std::size_t n = setup.densities.size();
  const double lambda_max = setup.densities.back();
  scratch.reset();

  for (const Tier& tier : setup.tiers)
  {
    Rng rng = substream(seed, trial, tier.stream);
    const double mean = lambda_max * pi * (tier.r_max * tier.r_max - tier.r_min * tier.r_min);
    const long count = std::poisson_distribution<long>(mean)(rng);
    std::uniform_real_distribution<double> beam(-1.0, 1.0);
    for (long i = 0; i < count; ++i)
    {
      const double r = radius_draw(tier.r_min, tier.r_max, rng);
      const double fading = nakagami_power(tier.fading_m, rng);
      const double beam_gain = setup.pattern.sample_interferer_gain(beam(rng));
      const double mark = open_unit(rng) * lambda_max;
      // first density at which the point survives thinning
      const auto first = static_cast<std::size_t>(
          std::lower_bound(setup.densities.begin(), setup.densities.end(), mark) - setup.densities.begin());
      if (first >= n)
        continue;
      const double path = tier.pl_scale * std::pow(r, -tier.alpha);
      const double contribution = path * fading * beam_gain;
      scratch.interference[first] += contribution;
      if (setup.cellular && path > scratch.best_path[first])
      {
        scratch.best_path[first] = path;
        scratch.best_signal[first] = path * fading;
        scratch.best_contribution[first] = contribution;
      }
    }
  }

  double signal = 0.0;
  if (!setup.cellular)
  {
    Rng rng = substream(seed, trial, signal_stream);
    signal = nakagami_power(setup.signal_m, rng) * setup.signal_path;
  }

  double total = 0.0;
  double best_path = -1.0;
  double serving_contribution = 0.0;
  for (std::size_t j = 0; j < n; ++j)
  {
    total += scratch.interference[j];
    if (!setup.cellular)
    {
      if (covered(setup, signal, total))
        ++successes[j];
      continue;
    }
    if (scratch.best_path[j] > best_path)
    {
      best_path = scratch.best_path[j];
      signal = scratch.best_signal[j];
      serving_contribution = scratch.best_contribution[j];
    }
    if (best_path < 0.0)
      continue; // no BS at all: outage
    if (covered(setup, signal, std::max(0.0, total - serving_contribution)))
      ++successes[j];
  }
}

std::vector<McEstimate> run(const Setup& setup, const SimControl& ctl)
{
  const std::size_t n = setup.densities.size();
  int workers = ctl.threads > 0 ? ctl.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp<long>(workers, 1, ctl.trials);

  std::vector<std::vector<long>> partial(static_cast<std::size_t>(workers), std::vector<long>(n, 0));
  const auto work = [&](int w) {
    Scratch scratch(n);
    const long begin = ctl.trials * w / workers;
    const long end = ctl.trials * (w + 1) / workers;
    for (long t = begin; t < end; ++t)
      run_trial(setup, ctl.seed, static_cast<std::uint64_t>(t), scratch, partial[static_cast<std::size_t>(w)]);
  };
  if (workers == 1)
    work(0);
  else
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(work, w);
  }

  std::vector<McEstimate> out(n);
  for (std::size_t j = 0; j < n; ++j)
  {
    long hits = 0;
    for (const auto& p : partial)
      hits += p[j];
    McEstimate& e = out[j];
    e.trials = ctl.trials;
    e.seed = ctl.seed;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(ctl.trials);
    e.stderr = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(ctl.trials));
  }
  return out;
}

void check_densities(const std::vector<double>& densities)
{
  if (densities.empty())
    throw ConfigError("density sweep needs at least one value");
  for (std::size_t i = 0; i < densities.size(); ++i)
  {
    if (!(densities[i] > 0.0) || !std::isfinite(densities[i]))
      throw ConfigError("densities must be positive and finite");
    if (i > 0 && !(densities[i] > densities[i - 1]))
      throw ConfigError("densities must be strictly increasing");
  }
}

void add_nlos(Setup& setup, double big_r, double beta_los, const SimControl& ctl)
{
  if (ctl.include_nlos)
    setup.tiers.push_back(
        {big_r, ctl.outer_radius(big_r), 1, ctl.nlos_beta / beta_los, ctl.nlos_alpha, nlos_stream});
}

Setup adhoc_setup(const adhoc::AdHocConfig& cfg, antenna::PatternKind pattern, std::vector<double> densities,
                  const SimControl& ctl, Metric metric)
{
  cfg.validate();
  ctl.validate(cfg.big_r);
  check_densities(densities);
  Setup setup{.pattern = antenna::AntennaPattern(pattern, {cfg.n_t, cfg.spacing_ratio}), .densities = std::move(densities), .tiers = {}};
  setup.tiers.push_back({0.0, cfg.big_r, cfg.m, 1.0, cfg.alpha, los_stream});
  add_nlos(setup, cfg.big_r, cfg.beta_intercept, ctl);
  setup.signal_m = cfg.m;
  setup.signal_path = std::pow(cfg.r_0, -cfg.alpha);
  setup.noise = cfg.sigma_n2();
  setup.tau = cfg.tau;
  setup.metric = metric;
  return setup;
}

Setup cellular_setup(const cellular::CellularConfig& cfg, antenna::PatternKind pattern,
                     std::vector<double> densities, const SimControl& ctl, Metric metric)
{
  cfg.validate();
  ctl.validate(cfg.big_r);
  check_densities(densities);
  Setup setup{.pattern = antenna::AntennaPattern(pattern, {cfg.n_t, cfg.spacing_ratio}), .densities = std::move(densities), .tiers = {}};
  setup.tiers.push_back({0.0, cfg.big_r, cfg.m, 1.0, cfg.alpha, los_stream});
  add_nlos(setup, cfg.big_r, cfg.beta_intercept, ctl);
  setup.cellular = true;
  setup.noise = cfg.sigma2 / (cfg.beta_intercept * cfg.p_t * cfg.n_t);
  setup.tau = cfg.tau;
  setup.metric = metric;
  return setup;
}

} // namespace

Rng substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
{
  return Rng(splitmix64(splitmix64(seed ^ splitmix64(trial)) + stream));
}

std::vector<double> sample_ppp_annulus(double lambda_b, double r_min, double r_max, Rng& rng)
{
  const double mean = lambda_b * pi * (r_max * r_max - r_min * r_min);
  std::vector<double> radii;
  if (!(mean > 0.0))
    return radii;
  const long count = std::poisson_distribution<long>(mean)(rng);
  radii.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i)
    radii.push_back(radius_draw(r_min, r_max, rng));
  return radii;
}

double nakagami_power(int m, Rng& rng)
{
  if (m == 1)
    return std::exponential_distribution<double>(1.0)(rng);
  return std::gamma_distribution<double>(m, 1.0 / m)(rng);
}

McEstimate simulate_adhoc(const adhoc::AdHocConfig& cfg, antenna::PatternKind pattern, const SimControl& ctl,
                          Metric metric)
{
  return run(adhoc_setup(cfg, pattern, {cfg.lambda_b}, ctl, metric), ctl).front();
}

McEstimate simulate_cellular(const cellular::CellularConfig& cfg, antenna::PatternKind pattern,
                             const SimControl& ctl, Metric metric)
{
  return run(cellular_setup(cfg, pattern, {cfg.lambda_b}, ctl, metric), ctl).front();
}

std::vector<McEstimate> simulate_adhoc_density(const adhoc::AdHocConfig& cfg, antenna::PatternKind pattern,
                                               const std::vector<double>& densities, const SimControl& ctl,
                                               Metric metric)
{
  return run(adhoc_setup(cfg, pattern, densities, ctl, metric), ctl);
}

std::vector<McEstimate> simulate_cellular_density(const cellular::CellularConfig& cfg, antenna::PatternKind pattern,
                                                  const std::vector<double>& densities, const SimControl& ctl,
                                                  Metric metric)
{
  return run(cellular_setup(cfg, pattern, densities, ctl, metric), ctl);
}

} // namespace mmcov::montecarlo
