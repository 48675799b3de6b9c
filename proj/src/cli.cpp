#include "mmcov/cli.hpp"

#include "mmcov/adhoc.hpp"
#include "mmcov/cellular.hpp"
#include "mmcov/errors.hpp"
#include "mmcov/montecarlo.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

namespace mmcov::cli
{

using json = nlohmann::ordered_json;

namespace
{

constexpr std::array sweep_names{"tau_db", "n_t", "lambda_b"};
constexpr std::array method_names{"analytic_prop1", "analytic_prop2", "analytic_cor2", "asymptotic",
                                  "mc_actual",      "mc_sinc",        "mc_cos",        "mc_flattop"};

template <std::size_t N>
bool known(const std::array<const char*, N>& names, const std::string& value)
{
  return std::any_of(names.begin(), names.end(), [&](const char* n) { return value == n; });
}

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(text);
  while (std::getline(is, field, sep))
    out.push_back(field);
  if (!text.empty() && text.back() == sep)
    out.emplace_back();
  return out;
}

double to_double(const std::string& s)
{
  std::size_t used = 0;
  double v = 0.0;
  try
  {
    v = std::stod(s, &used);
  }
  catch (const std::exception&)
  {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size())
    throw ConfigError("not a number: '" + s + "'");
  return v;
}

} // namespace

void CoverageCurve::validate() const
{
  if (!known(sweep_names, sweep))
    throw ConfigError("unknown sweep name '" + sweep + "'");
  if (!known(method_names, method))
    throw ConfigError("unknown method '" + method + "'");
  for (std::size_t i = 0; i < points.size(); ++i)
  {
    if (i > 0 && !(points[i].x > points[i - 1].x))
      throw ValidityError("curve x values must be strictly increasing");
    if (!(points[i].p >= 0.0 && points[i].p <= 1.0))
      throw ValidityError("curve value p = " + fmt(points[i].p) + " lies outside [0, 1]");
  }
}

void emit_curves(const std::vector<CoverageCurve>& curves, Format format, std::ostream& out)
{
  for (const auto& c : curves)
    c.validate();
  if (format == Format::Csv)
  {
    out << "sweep,x,p,stderr,method,seed\n";
    for (const auto& c : curves)
      for (const auto& pt : c.points)
        out << c.sweep << ',' << fmt(pt.x) << ',' << fmt(pt.p) << ',' << (pt.stderr ? fmt(*pt.stderr) : "") << ','
            << c.method << ',' << (c.seed ? std::to_string(*c.seed) : "") << '\n';
    return;
  }
  json doc;
  doc["curves"] = json::array();
  for (const auto& c : curves)
  {
    json jc;
    jc["sweep"] = c.sweep;
    jc["method"] = c.method;
    jc["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    jc["meta"] = c.meta;
    jc["points"] = json::array();
    for (const auto& pt : c.points)
      jc["points"].push_back({{"x", pt.x}, {"p", pt.p}, {"stderr", pt.stderr ? json(*pt.stderr) : json(nullptr)}});
    doc["curves"].push_back(std::move(jc));
  }
  out << doc.dump(2) << '\n';
}

std::vector<CoverageCurve> parse_curves(std::istream& in, Format format)
{
  std::vector<CoverageCurve> curves;
  if (format == Format::Json)
  {
    json doc;
    try
    {
      doc = json::parse(in);
      for (const auto& jc : doc.at("curves"))
      {
        CoverageCurve c;
        c.sweep = jc.at("sweep").get<std::string>();
        c.method = jc.at("method").get<std::string>();
        if (!jc.at("seed").is_null())
          c.seed = jc.at("seed").get<std::uint64_t>();
        c.meta = jc.at("meta");
        for (const auto& jp : jc.at("points"))
        {
          CurvePoint pt{jp.at("x").get<double>(), jp.at("p").get<double>(), std::nullopt};
          if (!jp.at("stderr").is_null())
            pt.stderr = jp.at("stderr").get<double>();
          c.points.push_back(pt);
        }
        curves.push_back(std::move(c));
      }
    }
    catch (const json::exception& e)
    {
      throw ConfigError(std::string("malformed curve JSON: ") + e.what());
    }
    for (const auto& c : curves)
      c.validate();
    return curves;
  }

  std::string line;
  if (!std::getline(in, line) || line != "sweep,x,p,stderr,method,seed")
    throw ConfigError("missing CSV header 'sweep,x,p,stderr,method,seed'");
  while (std::getline(in, line))
  {
    if (line.empty())
      continue;
    const auto f = split(line, ',');
    if (f.size() != 6)
      throw ConfigError("CSV row needs 6 fields: '" + line + "'");
    std::optional<std::uint64_t> seed;
    if (!f[5].empty())
      seed = std::stoull(f[5]);
    CurvePoint pt{to_double(f[1]), to_double(f[2]), std::nullopt};
    if (!f[3].empty())
      pt.stderr = to_double(f[3]);
    const bool continues = !curves.empty() && curves.back().sweep == f[0] && curves.back().method == f[4] &&
                           curves.back().seed == seed && pt.x > curves.back().points.back().x;
    if (!continues)
    {
      curves.emplace_back();
      curves.back().sweep = f[0];
      curves.back().method = f[4];
      curves.back().seed = seed;
    }
    curves.back().points.push_back(pt);
  }
  for (const auto& c : curves)
    c.validate();
  return curves;
}

std::vector<double> parse_sweep(const std::string& text)
{
  if (text.empty())
    throw ConfigError("empty sweep specification");
  std::vector<double> xs;
  if (text.find(':') != std::string::npos)
  {
    const auto f = split(text, ':');
    if (f.size() != 3)
      throw ConfigError("sweep must be start:stop:step, got '" + text + "'");
    const double start = to_double(f[0]);
    const double stop = to_double(f[1]);
    const double step = to_double(f[2]);
    if (!(step > 0.0) || !(stop >= start))
      throw ConfigError("sweep needs step > 0 and stop >= start, got '" + text + "'");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 100000)
      throw ConfigError("sweep has too many points: '" + text + "'");
    for (long i = 0; i < n; ++i)
      xs.push_back(start + static_cast<double>(i) * step);
  }
  else
  {
    for (const auto& f : split(text, ','))
      xs.push_back(to_double(f));
  }
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw ConfigError("sweep values must be strictly increasing: '" + text + "'");
  return xs;
}

namespace
{

enum class Network
{
  AdHoc,
  Cellular
};

std::string to_string(Network n)
{
  return n == Network::AdHoc ? "adhoc" : "cellular";
}

// Physical parameters shared by both networks, in user units.
struct Physical
{
  double r_0 = 25.0;
  double big_r = 200.0;
  double lambda_b = 1e-3;
  std::optional<int> n_t; // 64 ad hoc, 128 cellular
  int m = 3;
  double alpha = 2.1;
  double spacing_ratio = 0.25;
  double p_t = 1.0;
  double beta_db = -61.4;
  double noise_dbm = -74.0;
  double tau_db = 5.0;

  int array_size(Network n) const { return n_t.value_or(n == Network::AdHoc ? 64 : 128); }

  adhoc::AdHocConfig adhoc() const
  {
    adhoc::AdHocConfig c;
    c.r_0 = r_0;
    c.big_r = big_r;
    c.lambda_b = lambda_b;
    c.n_t = array_size(Network::AdHoc);
    c.m = m;
    c.alpha = alpha;
    c.spacing_ratio = spacing_ratio;
    c.p_t = p_t;
    c.beta_intercept = db_to_linear(beta_db);
    c.sigma2 = dbm_to_watts(noise_dbm);
    c.tau = db_to_linear(tau_db);
    return c;
  }

  cellular::CellularConfig cellular() const
  {
    cellular::CellularConfig c;
    c.big_r = big_r;
    c.lambda_b = lambda_b;
    c.n_t = array_size(Network::Cellular);
    c.m = m;
    c.alpha = alpha;
    c.spacing_ratio = spacing_ratio;
    c.p_t = p_t;
    c.beta_intercept = db_to_linear(beta_db);
    c.sigma2 = dbm_to_watts(noise_dbm);
    c.tau = db_to_linear(tau_db);
    return c;
  }

  json echo(Network n) const
  {
    json j;
    j["network"] = to_string(n);
    if (n == Network::AdHoc)
      j["r_0"] = r_0;
    j["R"] = big_r;
    j["lambda_b"] = lambda_b;
    j["n_t"] = array_size(n);
    j["M"] = m;
    j["alpha"] = alpha;
    j["d_over_lambda"] = spacing_ratio;
    j["P_t"] = p_t;
    j["beta_db"] = beta_db;
    j["noise_dbm"] = noise_dbm;
    j["tau_db"] = tau_db;
    return j;
  }
};

struct McOptions
{
  long trials = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  bool nlos = false;
  std::string metric = "sinr";
  int max_terms = 200; // the library default of 40 fails above ~10 dB for M = 5

  montecarlo::SimControl control() const
  {
    montecarlo::SimControl c;
    c.trials = trials;
    c.seed = seed;
    c.threads = threads;
    c.include_nlos = nlos;
    return c;
  }

  montecarlo::Metric parsed_metric() const
  {
    if (metric == "sinr")
      return montecarlo::Metric::Sinr;
    if (metric == "sir")
      return montecarlo::Metric::Sir;
    if (metric == "snr")
      return montecarlo::Metric::Snr;
    throw ConfigError("metric must be sinr, sir or snr, got '" + metric + "'");
  }
};

std::optional<antenna::PatternKind> mc_pattern(const std::string& method)
{
  if (method == "mc_actual")
    return antenna::PatternKind::Actual;
  if (method == "mc_sinc")
    return antenna::PatternKind::Sinc;
  if (method == "mc_cos")
    return antenna::PatternKind::Cosine;
  if (method == "mc_flattop")
    return antenna::PatternKind::FlatTop;
  return std::nullopt;
}

std::string mc_method(antenna::PatternKind kind)
{
  switch (kind)
  {
  case antenna::PatternKind::Actual: return "mc_actual";
  case antenna::PatternKind::Sinc: return "mc_sinc";
  case antenna::PatternKind::Cosine: return "mc_cos";
  case antenna::PatternKind::FlatTop: return "mc_flattop";
  }
  return "mc_actual";
}

void check_method(Network n, const std::string& method)
{
  if (!known(method_names, method))
    throw ConfigError("unknown method '" + method + "'");
  const bool adhoc_only = method == "analytic_prop1";
  const bool cellular_only = method == "analytic_prop2" || method == "analytic_cor2";
  if ((n == Network::AdHoc && cellular_only) || (n == Network::Cellular && adhoc_only))
    throw ConfigError("method '" + method + "' does not apply to the " + to_string(n) + " network");
}

void set_swept(Physical& phys, const std::string& sweep, double x)
{
  if (sweep == "tau_db")
    phys.tau_db = x;
  else if (sweep == "n_t")
  {
    if (x != std::floor(x) || x < 1.0)
      throw ConfigError("array sizes must be positive integers, got " + fmt(x));
    phys.n_t = static_cast<int>(x);
  }
  else
    phys.lambda_b = x;
}

// Runs f(i) for i in [0, n) on up to `threads` workers; results stay in order.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f)
{
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try
        {
          for (std::size_t i = w; i < n; i += workers)
            f(i);
        }
        catch (...)
        {
          errors[w] = std::current_exception();
        }
      });
  }
  for (const auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

double analytic_point(Network n, const std::string& method, const Physical& phys, const McOptions& mc)
{
  if (n == Network::AdHoc)
  {
    const adhoc::SeriesControl series{mc.max_terms, 1e-12};
    const auto cfg = phys.adhoc();
    if (method == "analytic_prop1")
      return adhoc::coverage_adhoc(cfg, series);
    return std::clamp(1.0 - adhoc::asymptotic_outage_adhoc(cfg, series), 0.0, 1.0);
  }
  const auto cfg = phys.cellular();
  if (method == "analytic_prop2")
    return cellular::coverage_cellular(cfg);
  if (method == "analytic_cor2")
    return cellular::coverage_cellular_lower(cfg);
  return std::clamp(1.0 - cellular::asymptotic_outage_cellular(cfg), 0.0, 1.0);
}

montecarlo::McEstimate mc_point(Network n, antenna::PatternKind pattern, const Physical& phys, const McOptions& mc)
{
  if (n == Network::AdHoc)
    return montecarlo::simulate_adhoc(phys.adhoc(), pattern, mc.control(), mc.parsed_metric());
  return montecarlo::simulate_cellular(phys.cellular(), pattern, mc.control(), mc.parsed_metric());
}

CoverageCurve build_curve(Network n, const std::string& method, const std::string& sweep,
                          const std::vector<double>& xs, const Physical& base, const McOptions& mc)
{
  check_method(n, method);
  CoverageCurve curve;
  curve.sweep = sweep;
  curve.method = method;
  curve.meta = base.echo(n);
  curve.meta[sweep == "tau_db" ? "tau_db" : sweep == "n_t" ? "n_t" : "lambda_b"] = nullptr;
  curve.meta["method"] = method;
  curve.points.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    curve.points[i].x = xs[i];

  const auto pattern = mc_pattern(method);
  if (!pattern)
  {
    if (n == Network::AdHoc)
      curve.meta["max_terms"] = mc.max_terms;
    // validate every point before spending time on any of them
    for (double x : xs)
    {
      Physical p = base;
      set_swept(p, sweep, x);
      n == Network::AdHoc ? p.adhoc().validate() : p.cellular().validate();
    }
    parallel_for(xs.size(), mc.threads, [&](std::size_t i) {
      Physical p = base;
      set_swept(p, sweep, xs[i]);
      curve.points[i].p = analytic_point(n, method, p, mc);
    });
    return curve;
  }

  curve.seed = mc.seed;
  curve.meta["trials"] = mc.trials;
  curve.meta["seed"] = mc.seed;
  curve.meta["nlos"] = mc.nlos;
  curve.meta["metric"] = mc.metric;
  std::vector<montecarlo::McEstimate> est;
  if (sweep == "lambda_b")
  {
    est = n == Network::AdHoc
              ? montecarlo::simulate_adhoc_density(base.adhoc(), *pattern, xs, mc.control(), mc.parsed_metric())
              : montecarlo::simulate_cellular_density(base.cellular(), *pattern, xs, mc.control(),
                                                      mc.parsed_metric());
  }
  else
  {
    for (double x : xs)
    {
      Physical p = base;
      set_swept(p, sweep, x);
      est.push_back(mc_point(n, *pattern, p, mc));
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
  {
    curve.points[i].p = est[i].p_hat;
    curve.points[i].stderr = est[i].stderr;
  }
  return curve;
}

struct Output
{
  std::string format = "csv";
  std::string path;
};

Format parse_format(const std::string& f)
{
  if (f == "csv")
    return Format::Csv;
  if (f == "json")
    return Format::Json;
  throw ConfigError("format must be csv or json, got '" + f + "'");
}

void write_text(const Output& o, const std::string& text, std::ostream& out)
{
  if (o.path.empty())
  {
    out << text;
    out.flush();
    if (!out)
      throw std::ios_base::failure("cannot write to standard output");
    return;
  }
  std::ofstream file(o.path, std::ios::binary);
  file << text;
  file.close();
  if (!file)
    throw std::ios_base::failure("cannot write '" + o.path + "'");
}

void write_curves(const Output& o, const std::vector<CoverageCurve>& curves, std::ostream& out)
{
  std::ostringstream buf;
  emit_curves(curves, parse_format(o.format), buf);
  write_text(o, buf.str(), out);
}

// pattern,x,gain over x in [-d/lambda, d/lambda]
void write_patterns(const Output& o, const std::vector<antenna::PatternKind>& kinds, const antenna::ArrayGeometry& g,
                    int points, std::ostream& out)
{
  g.validate();
  if (points < 2)
    throw ConfigError("pattern-dump needs at least 2 points");
  const Format format = parse_format(o.format);
  std::ostringstream buf;
  json doc;
  doc["n_t"] = g.n_t;
  doc["d_over_lambda"] = g.spacing_ratio;
  doc["patterns"] = json::array();
  if (format == Format::Csv)
    buf << "pattern,x,gain\n";
  for (auto kind : kinds)
  {
    const antenna::AntennaPattern pattern(kind, g);
    json jp;
    jp["pattern"] = std::string(antenna::to_string(kind));
    jp["x"] = json::array();
    jp["gain"] = json::array();
    for (int i = 0; i < points; ++i)
    {
      const double x = g.spacing_ratio * (-1.0 + 2.0 * i / (points - 1));
      const double v = pattern.gain(x);
      if (format == Format::Csv)
        buf << antenna::to_string(kind) << ',' << fmt(x) << ',' << fmt(v) << '\n';
      jp["x"].push_back(x);
      jp["gain"].push_back(v);
    }
    doc["patterns"].push_back(std::move(jp));
  }
  if (format == Format::Json)
    buf << doc.dump(2) << '\n';
  write_text(o, buf.str(), out);
}

void add_physical(CLI::App* app, Physical& p, bool with_r0, bool with_tau)
{
  if (with_r0)
    app->add_option("--r0", p.r_0, "dipole distance r_0 [m]")->capture_default_str();
  app->add_option("--R", p.big_r, "LOS ball radius [m]")->capture_default_str();
  app->add_option("--lambda", p.lambda_b, "density [m^-2]")->capture_default_str();
  app->add_option("--nt", p.n_t, "array size N_t (default 64 ad hoc, 128 cellular)");
  app->add_option("--m", p.m, "Nakagami parameter M")->capture_default_str();
  app->add_option("--alpha", p.alpha, "LOS path-loss exponent")->capture_default_str();
  app->add_option("--spacing", p.spacing_ratio, "element spacing d/lambda")->capture_default_str();
  app->add_option("--pt", p.p_t, "transmit power [W]")->capture_default_str();
  app->add_option("--beta-db", p.beta_db, "LOS intercept [dB]")->capture_default_str();
  app->add_option("--noise-dbm", p.noise_dbm, "noise power [dBm]")->capture_default_str();
  if (with_tau)
    app->add_option("--tau-db", p.tau_db, "SINR threshold [dB]")->capture_default_str();
}

void add_mc(CLI::App* app, McOptions& mc)
{
  app->add_option("--trials", mc.trials, "Monte Carlo trials per point")->capture_default_str();
  app->add_option("--seed", mc.seed, "master seed")->capture_default_str();
  app->add_flag("--nlos", mc.nlos, "add the NLOS tier to simulations");
  app->add_option("--metric", mc.metric, "sinr | sir | snr")->capture_default_str();
  app->add_option("--max-terms", mc.max_terms, "ad hoc series term budget")->capture_default_str();
}

void add_common(CLI::App* app, Output& o, McOptions& mc)
{
  app->add_option("--format", o.format, "csv | json")->capture_default_str();
  app->add_option("--out", o.path, "output file (default stdout)");
  app->add_option("--threads", mc.threads, "worker threads (0 = all cores)")->capture_default_str();
}

Network parse_network(const std::string& s)
{
  if (s == "adhoc")
    return Network::AdHoc;
  if (s == "cellular")
    return Network::Cellular;
  throw ConfigError("network must be adhoc or cellular, got '" + s + "'");
}

std::vector<double> log_grid(double lo, double hi, int per_decade)
{
  std::vector<double> xs;
  const int n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= n; ++i)
    xs.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
  return xs;
}

// One figure: a network, a swept variable, the caption parameters and the
// curves plotted in it.
struct Preset
{
  std::string description;
  std::string caption;
  Network network = Network::Cellular;
  std::string sweep;
  std::vector<double> xs;
  Physical phys;
  std::vector<std::string> methods;
  std::vector<int> m_values;
  // (nlos, metric) variants of every simulated curve
  std::vector<std::pair<bool, std::string>> variants{{false, "sinr"}};
  std::vector<antenna::PatternKind> patterns; // pattern-dump presets
};

std::map<std::string, Preset> presets()
{
  std::map<std::string, Preset> out;
  const std::vector<double> powers_of_two{4, 8, 16, 32, 64, 128, 256};

  Preset p;
  p.description = "cellular SINR/SIR/SNR coverage vs density, with and without the NLOS tier";
  p.caption = "R = 200 m, N_t = 64, tau = 10 dB, M = 3, alpha = 2.1";
  p.network = Network::Cellular;
  p.sweep = "lambda_b";
  p.xs = log_grid(1e-6, 1e-2, 4);
  p.phys.big_r = 200.0;
  p.phys.n_t = 64;
  p.phys.tau_db = 10.0;
  p.phys.m = 3;
  p.phys.alpha = 2.1;
  p.methods = {"mc_actual"};
  p.m_values = {3};
  p.variants = {{true, "sinr"}, {false, "sinr"}, {true, "sir"}, {true, "snr"}};
  out["fig1a"] = p;

  p = Preset{};
  p.description = "ad hoc SINR/SIR/SNR coverage vs density, with and without NLOS interferers";
  p.caption = "R = 180 m, N_t = 64, tau = 5 dB, M = 5, alpha = 2.2, r_0 = 25 m";
  p.network = Network::AdHoc;
  p.sweep = "lambda_b";
  p.xs = log_grid(1e-6, 1e-2, 4);
  p.phys.big_r = 180.0;
  p.phys.n_t = 64;
  p.phys.tau_db = 5.0;
  p.phys.m = 5;
  p.phys.alpha = 2.2;
  p.phys.r_0 = 25.0;
  p.methods = {"mc_actual"};
  p.m_values = {5};
  p.variants = {{true, "sinr"}, {false, "sinr"}, {true, "sir"}, {true, "snr"}};
  out["fig1b"] = p;

  p = Preset{};
  p.description = "the four antenna patterns over x in [-d/lambda, d/lambda]";
  p.caption = "N_t = 64";
  p.phys.n_t = 64;
  p.patterns = {antenna::PatternKind::Actual, antenna::PatternKind::Sinc, antenna::PatternKind::Cosine,
                antenna::PatternKind::FlatTop};
  out["fig2a"] = p;

  p = Preset{};
  p.description = "cellular coverage vs threshold simulated with each antenna pattern";
  p.caption = "R = 200 m, N_t = 64, lambda_b = 1e-3 m^-2, M = 3, alpha = 2.1";
  p.network = Network::Cellular;
  p.sweep = "tau_db";
  p.xs = parse_sweep("-10:30:2");
  p.phys.n_t = 64;
  p.methods = {"mc_actual", "mc_sinc", "mc_cos", "mc_flattop"};
  p.m_values = {3};
  out["fig2b"] = p;

  p = Preset{};
  p.description = "ad hoc coverage vs threshold, analytic bound against simulation";
  p.caption = "R = 200 m, lambda_b = 1e-3 m^-2, alpha = 2.1, r_0 = 25 m";
  p.network = Network::AdHoc;
  p.sweep = "tau_db";
  p.xs = parse_sweep("-10:16:2");
  p.phys.n_t = 64;
  p.methods = {"analytic_prop1", "mc_actual"};
  p.m_values = {3};
  out["fig3a"] = p;

  p = Preset{};
  p.description = "cellular coverage vs threshold: exact cosine expression, its lower bound, simulation";
  p.caption = "R = 200 m, N_t = 128, lambda_b = 1e-3 m^-2, M = 3, alpha = 2.1";
  p.network = Network::Cellular;
  p.sweep = "tau_db";
  p.xs = parse_sweep("-10:30:2");
  p.phys.n_t = 128;
  p.methods = {"analytic_prop2", "analytic_cor2", "mc_actual"};
  p.m_values = {3};
  out["fig4b"] = p;

  p = Preset{};
  p.description = "ad hoc coverage vs array size";
  p.caption = "R = 200 m, tau = 5 dB, lambda_b = 1e-3 m^-2, alpha = 2.1, r_0 = 25 m";
  p.network = Network::AdHoc;
  p.sweep = "n_t";
  p.xs = powers_of_two;
  p.methods = {"analytic_prop1", "mc_actual"};
  p.m_values = {3};
  out["fig5a"] = p;

  p = Preset{};
  p.description = "cellular coverage vs array size";
  p.caption = "R = 200 m, tau = 5 dB, lambda_b = 1e-3 m^-2, alpha = 2.1";
  p.network = Network::Cellular;
  p.sweep = "n_t";
  p.xs = {4, 8, 16, 32, 64, 128, 256, 512, 1024};
  p.methods = {"analytic_cor2", "mc_actual"};
  p.m_values = {3};
  out["fig5b"] = p;
  return out;
}

std::vector<CoverageCurve> run_preset(const std::string& name, const Preset& preset,
                                      const std::vector<std::string>& methods, const std::vector<int>& m_values,
                                      const McOptions& mc)
{
  std::vector<CoverageCurve> curves;
  for (int m : m_values)
    for (const auto& method : methods)
    {
      Physical phys = preset.phys;
      phys.m = m;
      const bool simulated = mc_pattern(method).has_value();
      const auto variants = simulated ? preset.variants : std::vector<std::pair<bool, std::string>>{{false, "sinr"}};
      for (const auto& [nlos, metric] : variants)
      {
        McOptions opts = mc;
        opts.nlos = nlos;
        opts.metric = metric;
        auto curve = build_curve(preset.network, method, preset.sweep, preset.xs, phys, opts);
        json meta;
        meta["preset"] = name;
        meta["caption"] = preset.caption;
        meta.update(curve.meta);
        curve.meta = std::move(meta);
        curves.push_back(std::move(curve));
      }
    }
  return curves;
}

int exit_code_for(const std::exception& e)
{
  if (dynamic_cast<const std::invalid_argument*>(&e))
    return 2;
  return 3;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Coverage analysis of mm-wave ad hoc and cellular networks with directional antenna arrays"};
  app.require_subcommand(1);

  Physical phys;
  McOptions mc;
  Output output;
  std::string sweep_text;
  std::vector<std::string> methods;
  std::string network_text;
  std::string pattern_text = "actual";
  std::vector<std::string> pattern_list;
  int pattern_points = 1001;
  std::string preset_name;
  std::vector<int> preset_m;
  bool list_presets = false;

  auto* adhoc_curve = app.add_subcommand("adhoc-curve", "ad hoc coverage vs threshold");
  add_physical(adhoc_curve, phys, true, false);
  add_mc(adhoc_curve, mc);
  add_common(adhoc_curve, output, mc);
  adhoc_curve->add_option("--tau-db", sweep_text, "threshold sweep [dB]")->default_val("-10:16:2");
  adhoc_curve->add_option("--method", methods, "analytic_prop1 | asymptotic | mc_<pattern> (repeatable)");

  auto* cellular_curve = app.add_subcommand("cellular-curve", "cellular coverage vs threshold");
  add_physical(cellular_curve, phys, false, false);
  add_mc(cellular_curve, mc);
  add_common(cellular_curve, output, mc);
  cellular_curve->add_option("--tau-db", sweep_text, "threshold sweep [dB]")->default_val("-10:30:2");
  cellular_curve->add_option("--method", methods,
                             "analytic_prop2 | analytic_cor2 | asymptotic | mc_<pattern> (repeatable)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage vs threshold");
  add_physical(simulate, phys, true, false);
  add_mc(simulate, mc);
  add_common(simulate, output, mc);
  simulate->add_option("--network", network_text, "adhoc | cellular")->required();
  simulate->add_option("--pattern", pattern_text, "actual | sinc | cosine | flattop")->capture_default_str();
  simulate->add_option("--tau-db", sweep_text, "threshold sweep [dB]")->default_val("5");

  auto* pattern_dump = app.add_subcommand("pattern-dump", "antenna gain over the pattern argument");
  pattern_dump->add_option("--pattern", pattern_list, "pattern(s) to dump (default all)");
  pattern_dump->add_option("--nt", phys.n_t, "array size N_t (default 64)");
  pattern_dump->add_option("--spacing", phys.spacing_ratio, "element spacing d/lambda")->capture_default_str();
  pattern_dump->add_option("--points", pattern_points, "samples per pattern")->capture_default_str();
  add_common(pattern_dump, output, mc);

  auto* nt_sweep = app.add_subcommand("nt-sweep", "coverage vs array size");
  add_physical(nt_sweep, phys, true, true);
  add_mc(nt_sweep, mc);
  add_common(nt_sweep, output, mc);
  nt_sweep->add_option("--network", network_text, "adhoc | cellular")->required();
  nt_sweep->add_option("--sizes", sweep_text, "array sizes")->default_val("4,8,16,32,64,128,256,512,1024");
  nt_sweep->add_option("--method", methods, "methods (repeatable)");

  auto* density_sweep = app.add_subcommand("density-sweep", "coverage vs density");
  add_physical(density_sweep, phys, true, true);
  add_mc(density_sweep, mc);
  add_common(density_sweep, output, mc);
  density_sweep->add_option("--network", network_text, "adhoc | cellular")->required();
  density_sweep->add_option("--densities", sweep_text, "densities [m^-2]")
      ->default_val("1e-6,1e-5,1e-4,1e-3,1e-2");
  density_sweep->add_option("--method", methods, "methods (repeatable)");

  auto* preset = app.add_subcommand("preset", "regenerate the data behind one figure");
  preset->add_option("name", preset_name, "fig1a | fig1b | fig2a | fig2b | fig3a | fig4b | fig5a | fig5b");
  preset->add_flag("--list", list_presets, "list presets and exit");
  preset->add_option("--method", methods, "override the preset's methods (repeatable)");
  preset->add_option("--m", preset_m, "Nakagami parameter(s) (repeatable)");
  preset->add_option("--trials", mc.trials, "Monte Carlo trials per point")->default_val(500000);
  preset->add_option("--seed", mc.seed, "master seed")->capture_default_str();
  add_common(preset, output, mc);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try
  {
    if (*adhoc_curve || *cellular_curve)
    {
      const Network n = *adhoc_curve ? Network::AdHoc : Network::Cellular;
      if (methods.empty())
        methods = {n == Network::AdHoc ? "analytic_prop1" : "analytic_prop2"};
      const auto xs = parse_sweep(sweep_text);
      std::vector<CoverageCurve> curves;
      for (const auto& method : methods)
        curves.push_back(build_curve(n, method, "tau_db", xs, phys, mc));
      write_curves(output, curves, out);
    }
    else if (*simulate)
    {
      const Network n = parse_network(network_text);
      const auto kind = antenna::parse_pattern(pattern_text);
      if (!kind)
        throw ConfigError("unknown pattern '" + pattern_text + "'");
      write_curves(output, {build_curve(n, mc_method(*kind), "tau_db", parse_sweep(sweep_text), phys, mc)}, out);
    }
    else if (*pattern_dump)
    {
      std::vector<antenna::PatternKind> kinds;
      for (const auto& name : pattern_list)
      {
        const auto kind = antenna::parse_pattern(name);
        if (!kind)
          throw ConfigError("unknown pattern '" + name + "'");
        kinds.push_back(*kind);
      }
      if (kinds.empty())
        kinds = presets().at("fig2a").patterns;
      write_patterns(output, kinds, {phys.n_t.value_or(64), phys.spacing_ratio}, pattern_points, out);
    }
    else if (*nt_sweep || *density_sweep)
    {
      const Network n = parse_network(network_text);
      const std::string sweep = *nt_sweep ? "n_t" : "lambda_b";
      if (methods.empty())
        methods = {n == Network::AdHoc ? "analytic_prop1" : "analytic_prop2"};
      const auto xs = parse_sweep(sweep_text);
      std::vector<CoverageCurve> curves;
      for (const auto& method : methods)
        curves.push_back(build_curve(n, method, sweep, xs, phys, mc));
      write_curves(output, curves, out);
    }
    else if (*preset)
    {
      const auto all = presets();
      if (list_presets)
      {
        std::ostringstream buf;
        for (const auto& [name, p] : all)
          buf << name << ": " << p.description << " (" << p.caption << ")\n";
        write_text(Output{"csv", output.path}, buf.str(), out);
        return 0;
      }
      const auto it = all.find(preset_name);
      if (it == all.end())
        throw ConfigError("unknown preset '" + preset_name + "'; try 'preset --list'");
      const Preset& p = it->second;
      if (!p.patterns.empty())
        write_patterns(output, p.patterns, {*p.phys.n_t, p.phys.spacing_ratio}, pattern_points, out);
      else
        write_curves(output,
                     run_preset(it->first, p, methods.empty() ? p.methods : methods,
                                preset_m.empty() ? p.m_values : preset_m, mc),
                     out);
    }
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}

} // namespace mmcov::cli
