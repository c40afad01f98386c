#include "hardy/radial_grid.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/error.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "field", "grid needs at least 2 nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > 0.0) || !std::isfinite(nodes_[i]))
      throw Error(ErrorKind::InvalidArgument, "field", "grid nodes must be positive and finite");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "field", "grid nodes must increase strictly");
  }
}

RadialGrid RadialGrid::log_spaced(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n < 2)
    throw Error(ErrorKind::InvalidArgument, "field", "bad log grid parameters");
  std::vector<double> v(n);
  const double a = std::log(r_min);
  const double d = (std::log(r_max) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(a + d * static_cast<double>(i));
  v.front() = r_min;
  v.back() = r_max;
  return RadialGrid(std::move(v));
}

RadialGrid RadialGrid::centered(double center, double decades, std::size_t k) {
  if (!(center > 0.0) || !(decades > 0.0) || k < 1)
    throw Error(ErrorKind::InvalidArgument, "field", "bad centered grid parameters");
  const double d = decades * std::log(10.0) / static_cast<double>(k);
  std::vector<double> v(2 * k + 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double j = static_cast<double>(i) - static_cast<double>(k);
    v[i] = center * std::exp(j * d);
  }
  v[k] = center;
  return RadialGrid(std::move(v));
}

RadialGrid RadialGrid::default_grid() { return log_spaced(1e-6, 1e6, 2048); }

RadialGrid RadialGrid::refined() const {
  std::vector<double> v;
  v.reserve(2 * nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    v.push_back(nodes_[i]);
    v.push_back(std::sqrt(nodes_[i] * nodes_[i + 1]));
  }
  v.push_back(nodes_.back());
  return RadialGrid(std::move(v));
}

std::size_t RadialGrid::locate(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(i, nodes_.size() - 2);
}

void RadialGrid::element_rule(std::size_t i, double* r, double* w) const {
  // Gauss in log r, so power-law weights are integrated accurately.
  const auto& g = quad::gauss4();
  const double x0 = std::log(nodes_[i]);
  const double x1 = std::log(nodes_[i + 1]);
  const double half = 0.5 * (x1 - x0);
  const double mid = 0.5 * (x1 + x0);
  for (int q = 0; q < 4; ++q) {
    r[q] = std::exp(mid + half * g.x[q]);
    w[q] = g.w[q] * half * r[q];
  }
}

}  // namespace hardy
