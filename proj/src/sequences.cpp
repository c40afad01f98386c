#include <algorithm>
#include <cmath>

#include "hardy/error.hpp"
#include "hardy/quadform.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

namespace {

[[noreturn]] void fail(ErrorKind k, const std::string& msg) { throw Error(k, "quadform", msg); }

constexpr double kE = 2.718281828459045;

// int_a^b f(r) dr in the variable x = log r, split at the given radii.
double integrate_log(const std::function<double(double)>& f, double a, double b, std::vector<double> breaks = {}) {
  std::vector<double> xb;
  for (double r : breaks)
    if (r > a && r < b) xb.push_back(std::log(r));
  std::sort(xb.begin(), xb.end());
  quad::Options o;
  o.abs_tol = 0.0;
  return quad::integrate_piecewise([&f](double x) {
    double r = std::exp(x);
    return f(r) * r;
  }, std::log(a), std::log(b), xb, o);
}

// Flux Phi(r) of a radial field.
struct FluxEval {
  RadialDensity rd;
  double alpha = 0.0;
  double operator()(double r) const {
    if (r >= rd.support) return alpha;
    double lo = 0.0, total = 0.0;
    auto f = [this](double t) { return rd.b(t) * t; };
    for (double x : rd.breakpoints) {
      if (x >= r) break;
      if (x > lo) total += quad::integrate(f, lo, x);
      lo = std::max(lo, x);
    }
    return total + quad::integrate(f, lo, r);
  }
};

SequenceRow prop_sharp(long long n, const FieldSpec& field) {
  if (n < 3) fail(ErrorKind::InvalidArgument, "PropSharp needs n >= 3");
  const RadialDensity rd = radial_density(field);
  const double nn = static_cast<double>(n);
  if (rd.support > nn)
    fail(ErrorKind::SupportOverlap, "field support " + std::to_string(rd.support) + " reaches into [n, e n^2]");
  const double alpha = compute_flux(field);
  const double L = std::log(nn);
  auto u = [nn, L](double r) {
    double lr = std::log(r);
    if (r <= kE * nn) return lr - L;
    if (r <= nn * nn) return 1.0;
    return 1.0 + 2 * L - lr;
  };
  SequenceRow row;
  row.n = n;
  // u' contributes 1 on each ramp, alpha^2 u^2 / r^2 gives 1/3 + (log n - 1) + 1/3
  row.numerator = 2 * M_PI * (2.0 + alpha * alpha * (L - 1.0 / 3.0));
  const std::vector<double> br{kE * nn, nn * nn};
  row.denominator =
      2 * M_PI * integrate_log([&u](double r) { double v = u(r); return v * v * r / (1 + r * r); }, nn, kE * nn * nn, br);
  row.log_denominator =
      2 * M_PI * integrate_log([&u](double r) { double v = u(r); return v * v * r * log_corrected(1.0, r); }, nn,
                               kE * nn * nn, br);
  row.quotient = row.numerator / row.denominator;
  return row;
}

SequenceRow prop_l1(long long n, const FieldSpec& field) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "PropL1 needs n >= 2");
  const double nn = static_cast<double>(n);
  FluxEval phi{radial_density(field), compute_flux(field)};
  const double alpha = phi.alpha;
  auto u = [nn](double r) { return std::min({std::max(std::log(r * nn), 0.0), 1.0, std::max(std::log(kE * nn / r), 0.0)}); };
  auto du = [nn](double r) {
    if (r < kE / nn) return 1.0 / r;
    if (r <= nn) return 0.0;
    return -1.0 / r;
  };
  const double a = 1.0 / nn, b = kE * nn;
  std::vector<double> br{kE / nn, nn};
  for (double x : phi.rd.breakpoints) br.push_back(x);
  if (phi.rd.compact()) br.push_back(phi.rd.support);

  SequenceRow row;
  row.n = n;
  double kin = integrate_log([&](double r) {
    double v = u(r), d = du(r), c = alpha - phi(r);
    return (d * d + c * c * v * v / (r * r)) * r;
  }, a, b, br);
  double top = std::min(b, phi.rd.support);
  double fld = top > a ? integrate_log([&](double r) { double v = u(r); return phi.rd.b(r) * v * v * r; }, a, top, br) : 0.0;
  row.numerator = 2 * M_PI * (kin + fld);
  row.denominator =
      2 * M_PI * integrate_log([&u](double r) { double v = u(r); return v * v * r / (1 + r * r); }, a, b, br);
  row.log_denominator =
      2 * M_PI * integrate_log([&u](double r) { double v = u(r); return v * v * r * log_corrected(1.0, r); }, a, b, br);
  row.quotient = row.numerator / row.denominator;
  return row;
}

SequenceRow ab_sharp(const TestSequence& seq, const FieldSpec& field) {
  const auto* ab = std::get_if<AharonovBohm>(&field.kind);
  if (!ab) fail(ErrorKind::InvalidArgument, "ABSharp needs an Aharonov-Bohm field");
  if (seq.n < 1) fail(ErrorKind::InvalidArgument, "ABSharp needs n >= 1");
  if (seq.spin == Spin::Both) fail(ErrorKind::InvalidArgument, "pick spin Plus or Minus");
  const double alpha = ab->alpha;
  if (seq.alpha != 0.0 && std::abs(seq.alpha - alpha) > 1e-12)
    fail(ErrorKind::InvalidArgument, "sequence alpha differs from the field flux");
  if (alpha == 0.0) fail(ErrorKind::InvalidArgument, "ABSharp needs alpha != 0");
  const double a = std::abs(alpha), nn = static_cast<double>(seq.n);
  const double c = seq.spin == Spin::Plus ? seq.k - alpha : alpha - seq.k;
  auto phi = [a, nn](double r) {
    if (r < 1 / nn) return std::pow(nn * r, a);
    if (r <= nn) return 1.0;
    return std::log(kE * nn / r);
  };
  auto dphi = [a, nn, &phi](double r) {
    if (r < 1 / nn) return a * phi(r) / r;
    if (r <= nn) return 0.0;
    return -1.0 / r;
  };
  // the inner piece decays like (n r)^{2a}; cut where it is below 1e-17
  const double lo = std::exp(-40.0 / a) / nn;
  const std::vector<double> br{1 / nn, nn};
  SequenceRow row;
  row.n = seq.n;
  row.numerator = 2 * M_PI * integrate_log([&](double r) {
    double v = dphi(r) + c * phi(r) / r;
    return v * v * r;
  }, lo, kE * nn, br);
  row.denominator = 2 * M_PI * integrate_log([&](double r) { double v = phi(r); return v * v / r; }, lo, kE * nn, br);
  row.log_denominator = row.denominator;
  row.quotient = row.numerator / row.denominator;
  return row;
}

}  // namespace

const char* to_string(TestSequence::Kind k) {
  switch (k) {
    case TestSequence::Kind::PropSharp: return "PropSharp";
    case TestSequence::Kind::PropL1: return "PropL1";
    case TestSequence::Kind::ABSharp: return "ABSharp";
  }
  return "?";
}

SequenceRow evaluate_sequence(const TestSequence& seq, const FieldSpec& field) {
  switch (seq.kind) {
    case TestSequence::Kind::PropSharp: return prop_sharp(seq.n, field);
    case TestSequence::Kind::PropL1: return prop_l1(seq.n, field);
    case TestSequence::Kind::ABSharp: return ab_sharp(seq, field);
  }
  fail(ErrorKind::InvalidArgument, "unknown sequence");
}

double rayleigh_of_sequence(const TestSequence& seq, const FieldSpec& field) {
  return evaluate_sequence(seq, field).quotient;
}

double extrapolate_log_limit(const std::vector<long long>& n, const std::vector<double>& q) {
  if (n.size() != q.size() || n.size() < 3) fail(ErrorKind::InvalidArgument, "need three points to extrapolate");
  // a + b x + c x^2 with x = 1 / log n, through the last three points
  const std::size_t k = n.size() - 3;
  double x[3], y[3];
  for (int i = 0; i < 3; ++i) {
    x[i] = 1.0 / std::log(static_cast<double>(n[k + i]));
    y[i] = q[k + i];
  }
  // Lagrange value at x = 0
  double a = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) w *= (0.0 - x[j]) / (x[i] - x[j]);
    a += w * y[i];
  }
  return a;
}

double log_slope(const std::vector<long long>& n, const std::vector<double>& y) {
  if (n.size() != y.size() || n.size() < 2) fail(ErrorKind::InvalidArgument, "need two points for a slope");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    double x = std::log(static_cast<double>(n[i]));
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace hardy
