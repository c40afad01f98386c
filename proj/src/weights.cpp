#include "hardy/weights.hpp"

#include <cmath>

#include "hardy/error.hpp"

namespace hardy {

namespace {

[[noreturn]] void fail(ErrorKind k, const std::string& msg) { throw Error(k, "weights", msg); }

void check_args(double rho, double beta, double x) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorKind::InvalidArgument, "rho must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) fail(ErrorKind::InvalidArgument, "beta must lie in (0, 1]");
  if (!(x >= 0.0)) fail(ErrorKind::InvalidArgument, "|x| must be nonnegative");
}

}  // namespace

const char* to_string(Spin s) {
  switch (s) {
    case Spin::Plus: return "Plus";
    case Spin::Minus: return "Minus";
    case Spin::Both: return "Both";
  }
  return "?";
}

const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::InverseSquareShifted: return "InverseSquareShifted";
    case WeightKind::LogCorrected: return "LogCorrected";
    case WeightKind::PureInverseSquare: return "PureInverseSquare";
    case WeightKind::Zero: return "Zero";
  }
  return "?";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::ThmNonInteger: return "ThmNonInteger";
    case Provenance::ThmInteger: return "ThmInteger";
    case Provenance::ThmMinusSpin: return "ThmMinusSpin";
    case Provenance::CorPauli: return "CorPauli";
    case Provenance::CorSchrodinger: return "CorSchrodinger";
    case Provenance::ThmAB: return "ThmAB";
  }
  return "?";
}

double mu_alpha(double alpha) { return std::abs(alpha - std::round(alpha)); }

bool is_integer_flux(double alpha) { return std::abs(alpha - std::round(alpha)) < kIntegerTol; }

double inverse_square_shifted(double rho, double x) { return 1.0 / (rho * rho + x * x); }

double log_corrected(double rho, double x) {
  if (x == 0.0) return 1.0 / (rho * rho);
  double l = std::log(x / rho);
  return 1.0 / (rho * rho + x * x * (1.0 + l * l));
}

double HardyBound::evaluate(double x) const {
  switch (weight) {
    case WeightKind::InverseSquareShifted: return constant * inverse_square_shifted(rho, x);
    case WeightKind::LogCorrected: return constant * log_corrected(rho, x);
    case WeightKind::PureInverseSquare: return x > 0.0 ? constant / (x * x) : (constant > 0.0 ? INFINITY : 0.0);
    case WeightKind::Zero: return 0.0;
  }
  return 0.0;
}

HardyBound hardy_bound(double alpha, double rho, double beta, Spin spin, const WeightOptions& opt) {
  check_args(rho, beta, 0.0);
  if (spin == Spin::Both) fail(ErrorKind::InvalidArgument, "a scalar weight needs spin Plus or Minus");
  HardyBound b;
  b.rho = rho;
  b.spin = spin;
  if (spin == Spin::Plus && alpha < 0.0)
    fail(ErrorKind::InvalidSpinSign, "w+ is only placed for alpha >= 0");
  if (spin == Spin::Minus && alpha > 0.0)
    fail(ErrorKind::InvalidSpinSign, "w- is only placed for alpha <= 0");
  b.provenance = spin == Spin::Minus ? Provenance::ThmMinusSpin : Provenance::ThmNonInteger;
  if (alpha == 0.0) {
    b.weight = WeightKind::Zero;
    b.constant = 0.0;
    return b;
  }
  if (is_integer_flux(alpha)) {
    double a = std::round(alpha);
    double c = opt.literal_constants ? a / (4.0 * a + M_PI) : std::abs(a) / (4.0 * std::abs(a) + M_PI);
    b.weight = WeightKind::LogCorrected;
    b.constant = beta * c;
    if (spin == Spin::Plus) b.provenance = Provenance::ThmInteger;
    return b;
  }
  double mu = mu_alpha(alpha);
  b.weight = WeightKind::InverseSquareShifted;
  b.constant = beta * mu * mu;
  return b;
}

HardyBound ab_bound(double alpha, Spin spin) {
  if (!(alpha > -1.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "Aharonov-Bohm flux must lie in (-1, 1)");
  HardyBound b;
  b.spin = spin;
  b.provenance = Provenance::ThmAB;
  double mu = mu_alpha(alpha);
  b.constant = mu * mu;
  b.weight = alpha == 0.0 ? WeightKind::Zero : WeightKind::PureInverseSquare;
  return b;
}

double hardy_weight(double alpha, double rho, double beta, Spin spin, double x, const WeightOptions& opt) {
  check_args(rho, beta, x);
  return hardy_bound(alpha, rho, beta, spin, opt).evaluate(x);
}

DiagonalWeight pauli_weight_matrix(double alpha, double rho, double beta_plus, double beta_minus, double x,
                                   const WeightOptions& opt) {
  check_args(rho, beta_plus, x);
  check_args(rho, beta_minus, x);
  DiagonalWeight w;
  if (alpha > 0.0) w.plus = hardy_weight(alpha, rho, beta_plus, Spin::Plus, x, opt);
  if (alpha < 0.0) w.minus = hardy_weight(alpha, rho, beta_minus, Spin::Minus, x, opt);
  return w;
}

double schrodinger_weight(double alpha, double rho, double beta_sigma, double x, const WeightOptions& opt) {
  if (alpha == 0.0) fail(ErrorKind::ZeroFlux, "the Schrodinger bound needs alpha != 0");
  Spin sigma = alpha > 0.0 ? Spin::Plus : Spin::Minus;
  return 0.5 * hardy_weight(alpha, rho, beta_sigma, sigma, x, opt);
}

nlohmann::json to_json(const HardyBound& b) {
  return nlohmann::json{{"constant", b.constant},
                        {"weight_kind", to_string(b.weight)},
                        {"rho", b.rho},
                        {"spin", to_string(b.spin)},
                        {"provenance", to_string(b.provenance)}};
}

}  // namespace hardy
