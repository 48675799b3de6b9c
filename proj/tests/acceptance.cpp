// Acceptance run: one PASS/FAIL line per criterion. Tolerances and runtime
// budgets are fixed below. Arguments select a subset of criteria by number.

#include "oracles.hpp"

#include "mmcov/adhoc.hpp"
#include "mmcov/cellular.hpp"
#include "mmcov/cli.hpp"
#include "mmcov/kernel.hpp"
#include "mmcov/montecarlo.hpp"
#include "mmcov/specfun.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mmcov;
using antenna::PatternKind;
using std::numbers::pi;

namespace
{

constexpr double toeplitz_abs_tol = 1e-10;
constexpr double specfun_rel_tol = 1e-7;
constexpr double sinc_abs_tol = 1e-6;
constexpr double xi_abs_tol = 1e-2;
constexpr double adhoc_mc_tol = 0.02;
constexpr double mc_sigmas = 4.0;
constexpr double cellular_mc_tol = 0.03;
constexpr double jensen_gap_tol = 0.05;
constexpr double ratio_lo = 0.9;
constexpr double ratio_hi = 1.1;
constexpr double nlos_tol = 0.02;
constexpr long acceptance_trials = 100000;

struct Outcome
{
  bool pass = true;
  std::string detail;
};

struct Criterion
{
  int id;
  const char* title;
  double budget_s; // 0: no wall-clock budget
  std::function<Outcome()> run;
};

std::string format(const char* fmt, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double rel_err(double a, double ref)
{
  return ref == 0.0 ? std::abs(a) : std::abs(a - ref) / std::abs(ref);
}

// Accumulates sub-check results into one outcome.
struct Tally
{
  Outcome out;
  void check(bool ok, const std::string& what)
  {
    if (!ok)
      out.pass = false;
    if (!out.detail.empty())
      out.detail += "; ";
    out.detail += (ok ? "" : "!") + what;
  }
};

// ---------------------------------------------------------------- 1

Outcome toeplitz_recursion()
{
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> head(-6.0, 0.0);
  std::uniform_real_distribution<double> tail(0.0, 3.0);
  double worst = 0.0;
  for (int v = 0; v < 100; ++v)
  {
    kernel::CoeffVector cv;
    cv.m = size(rng);
    cv.c.resize(static_cast<std::size_t>(cv.m));
    cv.c[0] = head(rng);
    for (std::size_t k = 1; k < cv.c.size(); ++k)
      cv.c[k] = tail(rng);
    const auto fast = kernel::ltt_exp_first_column(cv);
    const auto dense = oracle::dense_ltt_exp_first_column(cv.c);
    for (std::size_t i = 0; i < fast.size(); ++i)
      worst = std::max(worst, std::abs(fast[i] - dense[i]));
  }
  return {worst <= toeplitz_abs_tol, format("100 vectors, max abs err %.2e (tol %.0e)", worst, toeplitz_abs_tol)};
}

// ---------------------------------------------------------------- 2

// J_k through the fading-angle expectation behind the cosine-pattern moments:
// with c = cos^2(phi), phi uniform on [0, pi/2], and the gamma fading averaged
// in closed form,
//   J_0(x) = 1 - delta int_0^1 u^{-delta-1} E[(1 - x c u)^{-M} - 1] du
//   J_k(x) = (k - delta) int_0^1 u^{k-delta-1} E[c^k (1 - x c u)^{-M-k}] du / E[c^k],  k >= 1.
// u = e^{-s}; beyond s = 60 the integrand is its u -> 0 limit and is summed exactly.
double j_by_angle_quadrature(int k, int m, double delta, double x)
{
  using boost::math::quadrature::gauss_kronrod;
  const auto angle_mean = [](const auto& f) {
    return gauss_kronrod<double, 31>::integrate(f, 0.0, pi / 2, 15, 1e-12) * 2.0 / pi;
  };
  constexpr double cut = 60.0;
  const double rate = k == 0 ? 1.0 - delta : k - delta;
  const double moment = std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) / std::sqrt(pi); // E[c^k]
  std::function<double(double)> integrand;
  double total = 0.0;
  if (k == 0)
  {
    integrand = [&](double s) {
      const double u = std::exp(-s);
      return std::exp(delta * s) * angle_mean([&](double phi) {
               const double c = std::cos(phi) * std::cos(phi);
               return std::expm1(-m * std::log1p(-x * c * u));
             });
    };
    total = m * x * 0.5 * std::exp(-rate * cut) / rate;
  }
  else
  {
    integrand = [&](double s) {
      const double u = std::exp(-s);
      return std::exp(-rate * s) * angle_mean([&](double phi) {
               const double c = std::cos(phi) * std::cos(phi);
               return std::pow(c, k) * std::pow(1.0 - x * c * u, -m - k);
             });
    };
    total = moment * std::exp(-rate * cut) / rate;
  }
  for (double a = 0.0, b = 0.5; a < cut; a = b, b = std::min(2.0 * b, cut))
    total += gauss_kronrod<double, 31>::integrate(integrand, a, b, 15, 1e-12);
  return k == 0 ? 1.0 - delta * total : rate * total / moment;
}

Outcome special_functions()
{
  Tally t;
  const double alphas[] = {2.1, 2.4, 2.9};

  double worst = 0.0;
  for (int i = 0; i < 50; ++i)
  {
    const double p = -2.47 + 0.121 * i;
    const double z = std::pow(10.0, -3.0 + 4.5 * ((i * 7) % 50) / 49.0);
    worst = std::max(worst, rel_err(specfun::gen_exp_integral(p, z), oracle::exp_integral_series(p, z)));
  }
  t.check(worst <= specfun_rel_tol, format("E_p max rel %.1e", worst));

  worst = 0.0;
  for (int i = 0; i < 50; ++i)
  {
    const double s = 0.1 + 0.12 * i;
    const double x = 40.0 * ((i * 13) % 50) / 49.0;
    worst = std::max(worst, rel_err(specfun::lower_incomplete_gamma(s, x), oracle::lower_gamma_series(s, x)));
  }
  t.check(worst <= specfun_rel_tol, format("gamma(s,x) max rel %.1e", worst));

  worst = 0.0;
  for (int i = 0; i < 50; ++i)
  {
    const int k = i % 5;
    const int m = 1 + (i / 5) % 5;
    const double delta = 2.0 / alphas[i % 3];
    const double x = -0.9 * (i + 1) / 50.0;
    const double ref = oracle::hyp3f2_series(k + 0.5, k - delta, k + m, k + 1.0, k + 1.0 - delta, x);
    worst = std::max(worst, rel_err(specfun::hyp3f2_J(k, m, delta, x), ref));
  }
  t.check(worst <= specfun_rel_tol, format("J_k vs series (|x|<=0.9) max rel %.1e", worst));

  worst = 0.0;
  for (int i = 0; i < 50; ++i)
  {
    const int k = i % 5;
    const int m = 1 + (i / 5) % 5;
    const double delta = 2.0 / alphas[i % 3];
    const double x = -100.0 * std::pow(i / 49.0, 2.0);
    worst = std::max(worst, rel_err(specfun::hyp3f2_J(k, m, delta, x), j_by_angle_quadrature(k, m, delta, x)));
  }
  t.check(worst <= specfun_rel_tol, format("J_k vs angle-fading quadrature (x in [-100,0]) max rel %.1e", worst));
  return t.out;
}

// ---------------------------------------------------------------- 3

Outcome sinc_power()
{
  Tally t;
  double worst = 0.0;
  for (int p = 1; p <= 6; ++p)
    worst = std::max(worst, std::abs(specfun::sinc_power_integral(p) - oracle::sinc_power_quadrature(2.0 * p, 2000)));
  t.check(worst <= sinc_abs_tol, format("closed form p=1..6 max abs %.1e", worst));
  const double dev = std::abs(specfun::xi(2.001) - pi / 2);
  t.check(dev <= xi_abs_tol, format("|xi(2.001) - pi/2| = %.2e", dev));
  return t.out;
}

// ---------------------------------------------------------------- 4

Outcome adhoc_vs_mc()
{
  Tally t;
  montecarlo::SimControl ctl;
  ctl.trials = acceptance_trials;
  double worst_excess = -1.0;
  std::string worst_at;
  int failures = 0;
  for (int m : {1, 2, 3})
    for (int n : {8, 16, 32, 64, 128})
    {
      adhoc::AdHocConfig cfg; // caption values: R 200, tau 5 dB, lambda 1e-3, alpha 2.1, r_0 25
      cfg.m = m;
      cfg.n_t = n;
      const double analytic = adhoc::coverage_adhoc(cfg, adhoc::SeriesControl{200, 1e-12});
      const auto mc = montecarlo::simulate_adhoc(cfg, PatternKind::Actual, ctl);
      const double tol = std::max(adhoc_mc_tol, mc_sigmas * mc.stderr);
      const double gap = std::abs(analytic - mc.p_hat);
      if (gap > tol)
        ++failures;
      if (gap - tol > worst_excess)
      {
        worst_excess = gap - tol;
        worst_at = format("M=%d N_t=%d analytic %.4f mc %.4f", m, n, analytic, mc.p_hat);
      }
    }
  t.check(failures == 0, format("%d/15 points outside max(%.2f, %.0f sigma); worst %s", failures, adhoc_mc_tol,
                                mc_sigmas, worst_at.c_str()));
  return t.out;
}

// ---------------------------------------------------------------- 5

Outcome cellular_vs_mc()
{
  Tally t;
  montecarlo::SimControl ctl;
  ctl.trials = acceptance_trials;
  double worst_mc = 0.0;
  double worst_gap = 0.0;
  double worst_order = 0.0; // largest lower - exact
  double at_mc = 0.0;
  double at_gap = 0.0;
  double at_order = 0.0;
  for (int i = 0; i <= 15; ++i)
  {
    const double tau_db = -10.0 + 2.0 * i;
    cellular::CellularConfig cfg; // R 200, N_t 128, lambda 1e-3, M 3, alpha 2.1
    cfg.tau = db_to_linear(tau_db);
    const double exact = cellular::coverage_cellular(cfg);
    const double lower = cellular::coverage_cellular_lower(cfg);
    const double mc = montecarlo::simulate_cellular(cfg, PatternKind::Actual, ctl).p_hat;
    if (std::abs(exact - mc) > worst_mc)
    {
      worst_mc = std::abs(exact - mc);
      at_mc = tau_db;
    }
    if (std::abs(exact - lower) > worst_gap)
    {
      worst_gap = std::abs(exact - lower);
      at_gap = tau_db;
    }
    if (lower - exact > worst_order)
    {
      worst_order = lower - exact;
      at_order = tau_db;
    }
  }
  t.check(worst_mc <= cellular_mc_tol,
          format("max |Prop2 - MC| %.4f at %g dB (tol %.2f)", worst_mc, at_mc, cellular_mc_tol));
  t.check(worst_order <= 0.0, format("max (Cor2 - Prop2) %.2e at %g dB (must be <= 0)", worst_order, at_order));
  t.check(worst_gap <= jensen_gap_tol,
          format("max |Prop2 - Cor2| %.4f at %g dB (tol %.2f)", worst_gap, at_gap, jensen_gap_tol));
  return t.out;
}

// ---------------------------------------------------------------- 6

struct SizeLaw
{
  int increasing_violations = 0;
  int concavity_violations = 0;
  double worst_first = 0.0;  // most negative first difference
  double worst_second = 0.0; // most positive change of slope in t
};

SizeLaw size_law(const std::vector<int>& sizes, const std::function<double(int)>& coverage)
{
  std::vector<double> t;
  std::vector<double> p;
  for (int n : sizes)
  {
    t.push_back(1.0 / n);
    p.push_back(coverage(n));
  }
  SizeLaw law;
  for (std::size_t i = 1; i < p.size(); ++i)
  {
    const double d = p[i] - p[i - 1];
    if (d < 0.0)
    {
      ++law.increasing_violations;
      law.worst_first = std::min(law.worst_first, d);
    }
  }
  // slopes in t; concave means they decrease as t increases (N_t decreases)
  for (std::size_t i = 2; i < p.size(); ++i)
  {
    const double slope_small_t = (p[i - 1] - p[i]) / (t[i - 1] - t[i]);
    const double slope_large_t = (p[i - 2] - p[i - 1]) / (t[i - 2] - t[i - 1]);
    const double d2 = slope_large_t - slope_small_t;
    if (d2 > 0.0)
    {
      ++law.concavity_violations;
      law.worst_second = std::max(law.worst_second, d2);
    }
  }
  return law;
}

Outcome array_size_law()
{
  Tally t;
  const std::vector<int> sizes{4, 8, 16, 32, 64, 128, 256, 512, 1024};
  for (int m : {1, 2, 3})
  {
    const auto adhoc_law = size_law(sizes, [m](int n) {
      adhoc::AdHocConfig cfg;
      cfg.m = m;
      cfg.n_t = n;
      return adhoc::coverage_adhoc(cfg, adhoc::SeriesControl{200, 1e-12});
    });
    const auto cell_law = size_law(sizes, [m](int n) {
      cellular::CellularConfig cfg;
      cfg.tau = db_to_linear(5.0);
      cfg.m = m;
      cfg.n_t = n;
      return cellular::coverage_cellular_lower(cfg);
    });
    for (const auto& [name, law] : {std::pair{"adhoc", adhoc_law}, std::pair{"cellular", cell_law}})
    {
      t.check(law.increasing_violations == 0,
              format("%s M=%d: %d negative first differences (min %.2e)", name, m, law.increasing_violations,
                     law.worst_first));
      t.check(law.concavity_violations == 0,
              format("%s M=%d: %d/7 positive second differences in t (max %.2e)", name, m,
                     law.concavity_violations, law.worst_second));
    }

    adhoc::AdHocConfig a;
    a.m = m;
    a.n_t = 1024;
    const double mu_a = adhoc::asymptotic_outage_adhoc(a, adhoc::SeriesControl{200, 1e-12}) * a.n_t;
    const double ratio_a = a.n_t * (1.0 - adhoc::coverage_adhoc(a, adhoc::SeriesControl{200, 1e-12})) / mu_a;
    t.check(ratio_a >= ratio_lo && ratio_a <= ratio_hi, format("adhoc M=%d ratio %.4f", m, ratio_a));

    cellular::CellularConfig c;
    c.m = m;
    c.n_t = 1024;
    const double floor = std::exp(-c.los_mass());
    const double mu_c = (cellular::asymptotic_outage_cellular(c) - floor) * c.n_t;
    const double ratio_c = c.n_t * (1.0 - cellular::coverage_cellular_lower(c) - floor) / mu_c;
    t.check(ratio_c >= ratio_lo && ratio_c <= ratio_hi, format("cellular M=%d ratio %.4f", m, ratio_c));
  }
  return t.out;
}

// ---------------------------------------------------------------- 7

std::vector<double> fig1_densities()
{
  std::vector<double> xs;
  for (int i = 0; i <= 16; ++i)
    xs.push_back(1e-6 * std::pow(10.0, i / 4.0));
  return xs;
}

Outcome nlos_and_density()
{
  Tally t;
  const auto densities = fig1_densities();
  montecarlo::SimControl los_only;
  los_only.trials = acceptance_trials;
  montecarlo::SimControl with_nlos = los_only;
  with_nlos.include_nlos = true;

  cellular::CellularConfig c;
  c.n_t = 64;
  c.tau = db_to_linear(10.0);
  const auto cn = montecarlo::simulate_cellular_density(c, PatternKind::Actual, densities, with_nlos);
  const auto cl = montecarlo::simulate_cellular_density(c, PatternKind::Actual, densities, los_only);
  double worst = 0.0;
  double at = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i)
    if (std::abs(cn[i].p_hat - cl[i].p_hat) > worst)
    {
      worst = std::abs(cn[i].p_hat - cl[i].p_hat);
      at = densities[i];
    }
  t.check(worst < nlos_tol, format("cellular max |NLOS - LOS only| %.1e at %.2g (tol %.2f)", worst, at, nlos_tol));

  const auto peak = std::max_element(cn.begin(), cn.end(),
                                     [](const auto& a, const auto& b) { return a.p_hat < b.p_hat; });
  const auto idx = static_cast<std::size_t>(peak - cn.begin());
  const bool interior = idx > 0 && idx + 1 < cn.size() &&
                        peak->p_hat > cn.front().p_hat + mc_sigmas * cn.front().stderr &&
                        peak->p_hat > cn.back().p_hat + mc_sigmas * cn.back().stderr;
  t.check(interior, format("cellular peak %.4f at %.2g (ends %.4f, %.4f)", peak->p_hat, densities[idx],
                           cn.front().p_hat, cn.back().p_hat));

  adhoc::AdHocConfig a;
  a.big_r = 180.0;
  a.n_t = 64;
  a.tau = db_to_linear(5.0);
  a.m = 5;
  a.alpha = 2.2;
  a.r_0 = 25.0;
  for (const auto* ctl : {&with_nlos, &los_only})
  {
    const auto curve = montecarlo::simulate_adhoc_density(a, PatternKind::Actual, densities, *ctl);
    int rises = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (curve[i].p_hat > curve[i - 1].p_hat)
        ++rises;
    t.check(rises == 0, format("adhoc %s: %d increases, %.4f -> %.4f", ctl->include_nlos ? "NLOS" : "LOS only",
                               rises, curve.front().p_hat, curve.back().p_hat));
  }
  return t.out;
}

// ---------------------------------------------------------------- 8

std::string invoke(std::vector<std::string> args)
{
  args.insert(args.begin(), "mmcov");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return "exit " + std::to_string(code) + "\n" + out.str();
}

Outcome determinism()
{
  Tally t;
  const std::vector<std::vector<std::string>> invocations{
      {"simulate", "--network", "adhoc", "--tau-db", "-5:15:5", "--trials", "5000", "--seed", "17", "--nlos"},
      {"simulate", "--network", "cellular", "--tau-db", "-10:20:5", "--trials", "5000", "--seed", "99",
       "--pattern", "flattop", "--metric", "sir"},
      {"simulate", "--network", "cellular", "--tau-db", "10", "--trials", "5000", "--nlos", "--pattern", "sinc"},
      {"density-sweep", "--network", "cellular", "--densities", "1e-5,1e-4,1e-3", "--method", "mc_actual",
       "--trials", "5000", "--seed", "5", "--nlos"},
  };
  int mismatches = 0;
  for (const auto& base : invocations)
  {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4", "1", "7"})
    {
      auto args = base;
      args.insert(args.end(), {"--threads", threads});
      outputs.push_back(invoke(args));
    }
    const bool ok = outputs.front().rfind("exit 0\n", 0) == 0 &&
                    std::all_of(outputs.begin(), outputs.end(), [&](const auto& o) { return o == outputs.front(); });
    if (!ok)
      ++mismatches;
  }
  t.check(mismatches == 0, format("%d/%zu invocations differ across repeats and 1/4/7 threads", mismatches,
                                  invocations.size()));
  return t.out;
}

} // namespace

int main(int argc, char** argv)
{
  const std::vector<Criterion> criteria{
      {1, "Toeplitz recursion vs dense matrix exponential", 1.0, toeplitz_recursion},
      {2, "special functions vs high-precision oracles", 30.0, special_functions},
      {3, "sinc-power closed form and xi limit", 10.0, sinc_power},
      {4, "ad hoc analytic vs Monte Carlo (array-size preset)", 0.0, adhoc_vs_mc},
      {5, "cellular analytic vs Monte Carlo and Jensen bound", 0.0, cellular_vs_mc},
      {6, "array-size law and asymptotic slope", 60.0, array_size_law},
      {7, "NLOS negligibility and density trends", 0.0, nlos_and_density},
      {8, "simulate determinism across thread counts", 0.0, determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i)
    selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria)
  {
    if (!selected.empty() && !selected.contains(c.id))
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception& e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = format("%.1f s", elapsed);
    if (c.budget_s > 0.0)
    {
      timing += format(" of %.0f s", c.budget_s);
      if (elapsed > c.budget_s)
      {
        o.pass = false;
        timing += " (over budget)";
      }
    }
    if (!o.pass)
      ++failed;
    std::printf("%s [%d] %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
