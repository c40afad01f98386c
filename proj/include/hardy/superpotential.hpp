#pragma once

#include <iosfwd>
#include <vector>

#include "hardy/field.hpp"
#include "hardy/radial_grid.hpp"

namespace hardy {

struct Point2 {
  double x = 0.0, y = 0.0;
};

// h sampled on radial nodes (radial case) or at scattered points (general
// case). For compact radial fields h(r) = -alpha log r exactly past
// tail_start; for decaying fields only asymptotically.
struct SuperpotentialTable {
  bool radial = true;
  std::vector<double> r;       // nodes, or |x| of the points
  std::vector<Point2> points;  // general case only
  std::vector<double> h;
  std::vector<double> flux;    // Phi(r) at the nodes (radial); gives h' = -Phi/r
  // b r^2 just left / right of each node (second x-derivative of -h);
  // empty for imported tables, which fall back to cubic interpolation
  std::vector<double> curv_left, curv_right;
  double h_origin = 0.0;       // h(0), radial case
  double alpha = 0.0;
  double tail_start = kInf;
  double tail_exponent = 0.0;  // -alpha
  bool compact = true;
  double tail_constant = 0.0;  // C in h + alpha log r ~ C / r (decaying fields)

  // Radial evaluation: cubic Hermite between nodes, exact/asymptotic tail.
  double eval(double r) const;
};

SuperpotentialTable compute_h_radial(const FieldSpec& field,
                                     const RadialGrid& grid = RadialGrid::default_grid());
SuperpotentialTable compute_h_general(const FieldSpec& field, const std::vector<Point2>& points);

// int over [x1,x2] x [y1,y2] of log|y| dy (rectangle relative to the point).
double cell_log_integral(double x1, double x2, double y1, double y2);

double g_plus(double rho, double alpha, double r);
double g_minus(double rho, double alpha, double r);

struct GaugeComparison {
  double rho = 1.0;
  double alpha = 0.0;
  double k_plus = 1.0, K_plus = 1.0;
  double k_minus = 1.0, K_minus = 1.0;
  double beta_plus = 1.0, beta_minus = 1.0;
  double r_k_plus = 0.0, r_K_plus = 0.0;  // where the extrema sit (inf = limit r -> inf)
};

GaugeComparison gauge_comparison(const SuperpotentialTable& h, double rho);

double lambda_R(const FieldSpec& field, double R);
double radial_beta(const FieldSpec& field, double R);

// Columnar text: '#' header lines with alpha, tail_start, tail_exponent,
// h_origin, compact; then rows "r h".
void export_table(const SuperpotentialTable& t, std::ostream& os);
SuperpotentialTable import_table(std::istream& is);

}  // namespace hardy
