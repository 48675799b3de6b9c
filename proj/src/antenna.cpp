#include "mmcov/antenna.hpp"

#include "mmcov/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>

namespace mmcov::antenna
{

using std::numbers::pi;

std::string_view to_string(PatternKind kind)
{
  switch (kind)
  {
  case PatternKind::Actual: return "actual";
  case PatternKind::Sinc: return "sinc";
  case PatternKind::Cosine: return "cosine";
  case PatternKind::FlatTop: return "flattop";
  }
  return "unknown";
}

std::optional<PatternKind> parse_pattern(std::string_view name)
{
  if (name == "actual") return PatternKind::Actual;
  if (name == "sinc") return PatternKind::Sinc;
  if (name == "cosine" || name == "cos") return PatternKind::Cosine;
  if (name == "flattop" || name == "flat-top") return PatternKind::FlatTop;
  return std::nullopt;
}

void ArrayGeometry::validate() const
{
  if (n_t < 1)
    throw ConfigError("array size must be >= 1");
  if (!(spacing_ratio > 0.0 && spacing_ratio <= 0.5))
    throw ConfigError("spacing ratio d/lambda must lie in (0, 0.5]");
}

double actual_gain(int n_t, double x)
{
  const double denominator = std::sin(pi * x);
  // removable singularity at integer x
  if (std::abs(denominator) < 1e-9)
    return 1.0;
  const double numerator = std::sin(pi * n_t * x);
  return numerator * numerator / (static_cast<double>(n_t) * n_t * denominator * denominator);
}

double sinc_gain(int n_t, double x)
{
  const double arg = pi * n_t * x;
  if (std::abs(arg) < 1e-8)
    return 1.0;
  const double s = std::sin(arg) / arg;
  return s * s;
}

double cosine_gain(int n_t, double x)
{
  if (std::abs(x) > 1.0 / n_t)
    return 0.0;
  const double c = std::cos(0.5 * pi * n_t * x);
  return c * c;
}

FlatTopParams flat_top_params(const ArrayGeometry& geometry)
{
  geometry.validate();
  const int n = geometry.n_t;
  if (n < 2)
    throw ConfigError("flat-top parameters need an array of at least 2 elements");

  // G_act decreases monotonically from 1 to 0 on the main lobe (0, 1/N).
  double lo = 0.0;
  double hi = 1.0 / n;
  while (hi - lo > 1e-12)
  {
    const double mid = 0.5 * (lo + hi);
    (actual_gain(n, mid) > 0.5 ? lo : hi) = mid;
  }

  FlatTopParams params;
  params.hpbw = lo + hi; // 2 * x*
  if (n == 2)
  {
    // cos^2(pi x) has no side lobe inside the visible period
    params.side_level = 0.0;
    return params;
  }
  const auto negated = [n](double x) { return -actual_gain(n, x); };
  const auto [x_max, value] = boost::math::tools::brent_find_minima(negated, 1.0 / n, 2.0 / n, 50);
  (void)x_max;
  params.side_level = -value;
  return params;
}

AntennaPattern::AntennaPattern(PatternKind kind, ArrayGeometry geometry)
    : kind_(kind), geometry_(geometry)
{
  geometry_.validate();
  if (kind_ == PatternKind::FlatTop)
    flat_top_ = flat_top_params(geometry_);
}

double AntennaPattern::gain(double x) const
{
  const int n = geometry_.n_t;
  switch (kind_)
  {
  case PatternKind::Actual: return actual_gain(n, x);
  case PatternKind::Sinc: return sinc_gain(n, x);
  case PatternKind::Cosine: return cosine_gain(n, x);
  case PatternKind::FlatTop: return std::abs(x) <= 0.5 * flat_top_.hpbw ? 1.0 : flat_top_.side_level;
  }
  return 0.0;
}

double gain(PatternKind kind, const ArrayGeometry& geometry, double x)
{
  return AntennaPattern(kind, geometry).gain(x);
}

double sample_interferer_gain(PatternKind kind, const ArrayGeometry& geometry, double u)
{
  return AntennaPattern(kind, geometry).sample_interferer_gain(u);
}

} // namespace mmcov::antenna
