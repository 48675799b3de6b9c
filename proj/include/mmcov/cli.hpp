#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mmcov::cli
{

struct CurvePoint
{
  double x = 0.0;
  double p = 0.0;
  std::optional<double> stderr; // empty for analytic methods

  bool operator==(const CurvePoint&) const = default;
};

struct CoverageCurve
{
  std::string sweep;  // tau_db | n_t | lambda_b
  std::string method; // analytic_prop1 | analytic_prop2 | analytic_cor2 | asymptotic | mc_<pattern>
  std::optional<std::uint64_t> seed;
  std::vector<CurvePoint> points;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  // x strictly increasing, p in [0, 1], known sweep and method tags.
  void validate() const;

  bool operator==(const CoverageCurve&) const = default;
};

enum class Format
{
  Csv,
  Json
};

// CSV: header `sweep,x,p,stderr,method,seed`, one row per point, %.10g.
// JSON: {"curves": [{sweep, method, seed, meta, points: [{x, p, stderr}]}]}.
void emit_curves(const std::vector<CoverageCurve>& curves, Format format, std::ostream& out);

// Inverse of emit_curves. CSV carries no meta; consecutive rows belong to
// one curve while (sweep, method, seed) repeat and x keeps increasing.
std::vector<CoverageCurve> parse_curves(std::istream& in, Format format);

// Parses "start:stop:step", a comma list, or a single value.
std::vector<double> parse_sweep(const std::string& text);

// Exit codes: 0 ok, 2 configuration or usage error, 3 numeric or I/O failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mmcov::cli
