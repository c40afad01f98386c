#include "hardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hardy/error.hpp"

namespace hardy::quad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gk(const Fn& f, double a, double b, const Options& opt) {
  if (!(b > a)) return 0.0;
  if (a > 0.0 && b > 2.5 * a) {
    // wide positive ranges: geometric blocks keep the recursion shallow
    double total = 0.0;
    for (double lo = a; lo < b; lo *= 2.0) total += gk(f, lo, std::min(2.0 * lo, b), opt);
    return total;
  }
  double err = 0.0;
  double l1 = 0.0;
  // map to [-1, 1] first: the library compares an unscaled error with a
  // scaled tolerance, which never terminates on short intervals
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double x) { return half * f(mid + half * x); };
  double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, -1.0, 1.0, 15, opt.rel_tol, &err, &l1);
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::NonIntegrableField, "quadrature",
                "non-finite integral on [" + std::to_string(a) + ", " +
                    std::to_string(b) + "]");
  }
  return v;
}

bool negligible(double block, double total, const Options& opt) {
  return std::abs(block) <= 1e-3 * opt.abs_tol + opt.rel_tol * std::abs(total);
}

// sum of f over (0, b] in blocks [b 2^-(k+1), b 2^-k]
double toward_zero(const Fn& f, double b, const Options& opt) {
  double total = 0.0;
  int quiet = 0;
  double hi = b;
  for (int k = 0; k < opt.max_blocks; ++k) {
    double lo = hi * 0.5;
    double c = gk(f, lo, hi, opt);
    total += c;
    quiet = negligible(c, total, opt) ? quiet + 1 : 0;
    if (quiet >= 4) return total;
    hi = lo;
  }
  throw Error(ErrorKind::NonIntegrableField, "quadrature",
              "integral does not converge toward r = 0");
}

double toward_infinity(const Fn& f, double a, const Options& opt) {
  double total = 0.0;
  int quiet = 0;
  double lo = a;
  for (int k = 0; k < opt.max_blocks; ++k) {
    double hi = lo * 2.0;
    double c = gk(f, lo, hi, opt);
    total += c;
    quiet = negligible(c, total, opt) ? quiet + 1 : 0;
    if (quiet >= 4) return total;
    lo = hi;
  }
  throw Error(ErrorKind::NonIntegrableField, "quadrature",
              "integral does not converge toward infinity");
}

}  // namespace

double integrate(const Fn& f, double a, double b, const Options& opt) {
  return gk(f, a, b, opt);
}

double integrate_dyadic(const Fn& f, double a, double b, const Options& opt) {
  if (!(b > a)) return 0.0;
  if (a == 0.0 && b == kInf) {
    return toward_zero(f, 1.0, opt) + toward_infinity(f, 1.0, opt);
  }
  if (a == 0.0) return toward_zero(f, b, opt);
  if (b == kInf) return toward_infinity(f, a, opt);
  return gk(f, a, b, opt);
}

double integrate_piecewise(const Fn& f, double a, double b,
                           const std::vector<double>& breaks,
                           const Options& opt) {
  if (!(b > a)) return 0.0;
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin() + 1, pts.end());
  pts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate_dyadic(f, pts[i], pts[i + 1], opt);
  return total;
}

const Rule4& gauss4() {
  static const Rule4 rule = [] {
    const double s = std::sqrt(6.0 / 5.0);
    const double x1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * s);
    const double x2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * s);
    const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
    const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
    return Rule4{{-x2, -x1, x1, x2}, {w2, w1, w1, w2}};
  }();
  return rule;
}

}  // namespace hardy::quad
