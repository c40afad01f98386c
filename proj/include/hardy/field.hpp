#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "hardy/radial_grid.hpp"

namespace hardy {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial density b(r). Built either from samples on a grid (linear
// interpolation, zero past the last node) or from a callable that is
// also sampled on the grid for support detection and export.
struct RadialProfile {
  RadialGrid grid;
  std::vector<double> samples;
  std::function<double(double)> density;
  std::vector<double> breakpoints;  // kinks / jumps of the density
  bool interpolated = false;        // density is the linear interpolant of the samples

  static RadialProfile from_samples(RadialGrid grid, std::vector<double> samples);
  static RadialProfile from_function(std::function<double(double)> b, RadialGrid grid,
                                     std::vector<double> breakpoints = {});

  // First node past the last sample with |b| >= 1e-14, pulled in to a
  // declared breakpoint when one sits in that last element; +inf when
  // the last sample is still significant.
  double support_radius() const;
};

// b_n(r) = alpha (n+2) r^n on (0,1).
struct PolynomialCutoff {
  double alpha = 0.0;
  int n = 0;
};

// Piecewise-constant B on nx * ny square cells; (x0, y0) is the lower
// left corner, values are row-major (index j * nx + i).
struct Sampled2D {
  std::size_t nx = 0, ny = 0;
  double cell = 1.0;
  double x0 = 0.0, y0 = 0.0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[j * nx + i]; }
  double center_x(std::size_t i) const { return x0 + (static_cast<double>(i) + 0.5) * cell; }
  double center_y(std::size_t j) const { return y0 + (static_cast<double>(j) + 0.5) * cell; }
};

struct AharonovBohm {
  double alpha = 0.0;
};

struct FieldSpec {
  std::variant<RadialProfile, PolynomialCutoff, Sampled2D, AharonovBohm> kind;
  double decay_exponent = 3.0;       // claimed tau > 2
  double local_integrability = 4.0;  // claimed p > 2, recorded only

  bool is_radial() const;
  std::string kind_name() const;
};

FieldSpec make_bn(double alpha, int n);
FieldSpec make_zero_field();
FieldSpec make_radial(RadialProfile profile, double tau = 3.0, double p = 4.0);
FieldSpec make_sampled(Sampled2D grid, double tau = 3.0, double p = 4.0);
FieldSpec make_ab(double alpha);

// Sampled2D filled with B(x, y) at cell centres.
Sampled2D sample_on_square(const std::function<double(double, double)>& B,
                           double half_width, std::size_t cells_per_side);

// Checks the metadata invariants; throws InvalidArgument.
void validate(const FieldSpec& field);

// c * b, and b1 + b2 (radial with radial, or sampled on identical grids).
FieldSpec scaled(const FieldSpec& field, double c);
FieldSpec sum(const FieldSpec& a, const FieldSpec& b);

// Radial view used by the other modules.
struct RadialDensity {
  std::function<double(double)> b;
  double support = kInf;
  std::vector<double> breakpoints;  // sorted, includes the support when finite
  bool compact() const { return support < kInf; }
};
RadialDensity radial_density(const FieldSpec& field);  // NonRadialField

double compute_flux(const FieldSpec& field);

struct FluxFunction {
  RadialGrid grid;
  std::vector<double> values;
  double total_flux = 0.0;
};
FluxFunction flux_function(const FieldSpec& field, const RadialGrid& grid);

struct DecayReport {
  std::string kind;
  bool compact = false;
  double claimed_tau = 0.0;
  double fitted_tau = 0.0;  // nan when no tail was fitted
  bool pass = false;
  std::string note;
};
DecayReport validate_decay(const FieldSpec& field);

}  // namespace hardy
