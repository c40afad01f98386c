#pragma once

#include <functional>
#include <vector>

namespace hardy::quad {

using Fn = std::function<double(double)>;

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-13;
  int max_blocks = 1000;  // dyadic blocks toward an open end
};

// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const Fn& f, double a, double b, const Options& opt = {});

// Handles a == 0 and/or b == +inf by summing dyadic blocks until they
// become negligible. Throws NonIntegrableField when the blocks do not
// decay within opt.max_blocks.
double integrate_dyadic(const Fn& f, double a, double b, const Options& opt = {});

// Splits (a, b) at the given breakpoints before integrating.
double integrate_piecewise(const Fn& f, double a, double b,
                           const std::vector<double>& breaks,
                           const Options& opt = {});

// 4-point Gauss-Legendre rule on [-1, 1].
struct Rule4 {
  double x[4];
  double w[4];
};
const Rule4& gauss4();

}  // namespace hardy::quad
