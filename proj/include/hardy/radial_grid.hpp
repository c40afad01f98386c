#pragma once

#include <cstddef>
#include <vector>

namespace hardy {

// Strictly increasing positive radial nodes, usually log-spaced.
class RadialGrid {
 public:
  RadialGrid() = default;
  explicit RadialGrid(std::vector<double> nodes);

  static RadialGrid log_spaced(double r_min, double r_max, std::size_t nodes);
  // 2 * intervals_per_side + 1 nodes, `center` is node intervals_per_side exactly.
  static RadialGrid centered(double center, double decades_per_side,
                             std::size_t intervals_per_side);
  static RadialGrid default_grid();  // 2048 nodes on [1e-6, 1e6]

  // Inserts the geometric midpoint of every element; old nodes are kept.
  RadialGrid refined() const;

  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }

  // Largest i with nodes[i] <= r, clamped to [0, size()-2].
  std::size_t locate(double r) const;

  // Gauss points and weights of element i in the variable r (4-point rule).
  void element_rule(std::size_t i, double* r, double* w) const;

 private:
  std::vector<double> nodes_;
};

}  // namespace hardy
