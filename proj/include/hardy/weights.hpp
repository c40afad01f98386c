#pragma once

#include <string>

#include "json.hpp"

namespace hardy {

enum class Spin { Plus, Minus, Both };
enum class WeightKind { InverseSquareShifted, LogCorrected, PureInverseSquare, Zero };
enum class Provenance { ThmNonInteger, ThmInteger, ThmMinusSpin, CorPauli, CorSchrodinger, ThmAB };

const char* to_string(Spin s);
const char* to_string(WeightKind k);
const char* to_string(Provenance p);

struct WeightOptions {
  bool literal_constants = false;  // use the printed alpha/(4 alpha + pi) for alpha <= -1
};

inline constexpr double kIntegerTol = 1e-9;

double mu_alpha(double alpha);
bool is_integer_flux(double alpha);

// Weight shapes without constants.
double inverse_square_shifted(double rho, double x);        // 1/(rho^2 + x^2)
double log_corrected(double rho, double x);                 // 1/(rho^2 + x^2 (1 + log^2(x/rho)))

struct HardyBound {
  double constant = 0.0;
  WeightKind weight = WeightKind::Zero;
  double rho = 1.0;
  Spin spin = Spin::Plus;
  Provenance provenance = Provenance::ThmNonInteger;

  double evaluate(double x) const;  // constant * shape(x)
};

// Bound of the regular-field theorems for spin Plus (alpha >= 0) or Minus (alpha <= 0).
HardyBound hardy_bound(double alpha, double rho, double beta, Spin spin, const WeightOptions& opt = {});
// Aharonov-Bohm bound mu^2 / |x|^2.
HardyBound ab_bound(double alpha, Spin spin);

double hardy_weight(double alpha, double rho, double beta, Spin spin, double x, const WeightOptions& opt = {});

struct DiagonalWeight {
  double plus = 0.0;   // entry (1,1)
  double minus = 0.0;  // entry (2,2)
};
DiagonalWeight pauli_weight_matrix(double alpha, double rho, double beta_plus, double beta_minus, double x,
                                   const WeightOptions& opt = {});

double schrodinger_weight(double alpha, double rho, double beta_sigma, double x, const WeightOptions& opt = {});

nlohmann::json to_json(const HardyBound& b);

}  // namespace hardy
