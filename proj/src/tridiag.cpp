#include "hardy/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hardy/error.hpp"

namespace hardy {

void Tridiagonal::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t n = diag.size();
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
}

std::size_t count_below(const Tridiagonal& K, const Tridiagonal& M, double sigma) {
  const std::size_t n = K.size();
  std::size_t neg = 0;
  double d = 0.0;
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  for (std::size_t i = 0; i < n; ++i) {
    double a = K.diag[i] - sigma * M.diag[i];
    if (i > 0) {
      double b = K.off[i - 1] - sigma * M.off[i - 1];
      a -= b * b / d;
    }
    if (a == 0.0) a = -tiny;
    if (a < 0.0) ++neg;
    d = a;
  }
  return neg;
}

namespace {

// LDL^T of A = K - sigma M, then solve A y = b
struct ShiftedSolver {
  std::vector<double> d, l;
  explicit ShiftedSolver(const Tridiagonal& K, const Tridiagonal& M, double sigma) {
    const std::size_t n = K.size();
    d.resize(n);
    l.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double a = K.diag[i] - sigma * M.diag[i];
      if (i > 0) {
        double b = K.off[i - 1] - sigma * M.off[i - 1];
        l[i - 1] = b / d[i - 1];
        a -= l[i - 1] * b;
      }
      if (a == 0.0) a = 1e-300;
      d[i] = a;
    }
  }
  void solve(const std::vector<double>& b, std::vector<double>& y) const {
    const std::size_t n = d.size();
    y = b;
    for (std::size_t i = 1; i < n; ++i) y[i] -= l[i - 1] * y[i - 1];
    for (std::size_t i = 0; i < n; ++i) y[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) y[i] -= l[i] * y[i + 1];
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

EigenResult min_generalized_eigen(const Tridiagonal& K, const Tridiagonal& M, double tol, int max_iter) {
  const std::size_t n = K.size();
  if (n == 0 || M.size() != n) throw Error(ErrorKind::InvalidArgument, "quadform", "matrix sizes differ");
  for (double m : M.diag)
    if (!(m > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadform", "mass matrix is not positive definite");

  // bracket: 0 <= lambda_1 <= min K_ii / M_ii
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) hi = std::min(hi, K.diag[i] / M.diag[i]);
  if (count_below(K, M, hi) == 0) hi *= 1.0 + 1e-12;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_below(K, M, mid) >= 1) hi = mid;
    else lo = mid;
  }

  EigenResult out;
  if (n == 1) {
    out.value = K.diag[0] / M.diag[0];
    out.vector = {1.0 / std::sqrt(M.diag[0])};
    return out;
  }
  // shifted inverse iteration just below the bracket
  const double sigma = lo * (1.0 - 1e-9);
  ShiftedSolver solver(K, M, sigma);
  std::vector<double> x(n, 1.0), y, Mx, Kx, r(n);
  for (int it = 1; it <= max_iter; ++it) {
    M.multiply(x, Mx);
    solver.solve(Mx, y);
    M.multiply(y, Mx);
    double nrm = std::sqrt(dot(y, Mx));
    for (double& v : y) v /= nrm;
    x.swap(y);
    K.multiply(x, Kx);
    M.multiply(x, Mx);
    double lam = dot(x, Kx);  // x^T M x = 1
    // componentwise backward error: rows of K can differ by many orders
    // of magnitude, so a plain norm only measures the rounding of Kx
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = Kx[i] - lam * Mx[i];
      double scale = std::abs(K.diag[i] * x[i]) + lam * std::abs(M.diag[i] * x[i]);
      if (i > 0) scale += std::abs(K.off[i - 1] * x[i - 1]) + lam * std::abs(M.off[i - 1] * x[i - 1]);
      if (i + 1 < n) scale += std::abs(K.off[i] * x[i + 1]) + lam * std::abs(M.off[i] * x[i + 1]);
      if (scale > 0.0) res = std::max(res, std::abs(r[i]) / scale);
    }
    out.value = lam;
    out.residual = res;
    out.iterations = it;
    if (res <= tol) {
      out.vector = x;
      return out;
    }
  }
  throw Error(ErrorKind::NoConvergence, "quadform",
              "inverse iteration did not reach residual " + std::to_string(tol) + " in " +
                  std::to_string(max_iter) + " iterations");
}

}  // namespace hardy
