#pragma once

#include <cstddef>
#include <vector>

namespace hardy {

// Symmetric tridiagonal matrix: diag[i], off[i] couples i and i+1.
struct Tridiagonal {
  std::vector<double> diag, off;

  std::size_t size() const { return diag.size(); }
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

struct EigenResult {
  double value = 0.0;
  double residual = 0.0;  // componentwise: max_i |K x - value M x|_i / (|K||x| + value |M||x|)_i
  int iterations = 0;
  std::vector<double> vector;
};

// Number of eigenvalues of the pencil (K, M) below sigma (Sylvester inertia of K - sigma M).
std::size_t count_below(const Tridiagonal& K, const Tridiagonal& M, double sigma);

// Smallest eigenvalue of K x = lambda M x, K symmetric positive semidefinite,
// M positive definite. Bisection on the inertia count brackets the value,
// shifted inverse iteration then polishes it and certifies the residual.
EigenResult min_generalized_eigen(const Tridiagonal& K, const Tridiagonal& M, double tol = 1e-9,
                                  int max_iter = 10000);

}  // namespace hardy
