#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace mmcov::antenna
{

enum class PatternKind
{
  Actual, // Fejer kernel sin^2(pi N x) / (N^2 sin^2(pi x))
  Sinc,
  Cosine,
  FlatTop
};

std::string_view to_string(PatternKind kind);
std::optional<PatternKind> parse_pattern(std::string_view name);

// Uniform linear array: n_t elements at spacing d, spacing_ratio = d / lambda.
struct ArrayGeometry
{
  int n_t = 64;
  double spacing_ratio = 0.25;

  void validate() const;
};

struct FlatTopParams
{
  double hpbw = 0.0;       // full width in pattern argument x
  double side_level = 0.0; // first side-lobe maximum of the Fejer kernel
};

/// Half-power width and first side-lobe level of the actual pattern.
FlatTopParams flat_top_params(const ArrayGeometry& geometry);

double actual_gain(int n_t, double x);
double sinc_gain(int n_t, double x);
double cosine_gain(int n_t, double x);

// A pattern bound to its geometry; flat-top parameters are resolved once.
class AntennaPattern
{
public:
  AntennaPattern(PatternKind kind, ArrayGeometry geometry);

  PatternKind kind() const { return kind_; }
  const ArrayGeometry& geometry() const { return geometry_; }

  double gain(double x) const;

  // Interferer gain for a beam-misdirection variate u ~ U[-1, 1]:
  // equal in law to G(d/lambda * theta).
  double sample_interferer_gain(double u) const { return gain(geometry_.spacing_ratio * u); }

private:
  PatternKind kind_;
  ArrayGeometry geometry_;
  FlatTopParams flat_top_{};
};

double gain(PatternKind kind, const ArrayGeometry& geometry, double x);
double sample_interferer_gain(PatternKind kind, const ArrayGeometry& geometry, double u);

} // namespace mmcov::antenna
