#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hardy/field.hpp"
#include "hardy/muckenhoupt.hpp"
#include "hardy/radial_grid.hpp"
#include "hardy/tridiag.hpp"
#include "hardy/weights.hpp"
#include "json.hpp"

namespace hardy {

enum class Endpoint { Inner, Outer, Both };

// One-dimensional form  int V |f'|^2 dr  over  int W |f|^2 dr  with f = 0
// at the essential endpoint(s). Weights are given through their logarithms
// so that power laws over many decades stay representable.
struct ModeForm {
  int m = 0;
  std::function<double(double)> log_top;     // log V(r)
  std::function<double(double)> log_bottom;  // log W(r)
  double r_min = 1e-4, r_max = 1e4;
  Endpoint essential = Endpoint::Inner;
};

struct FormOptions {
  double decades = 30.0;         // r in rho * 10^{-+decades}
  std::size_t intervals = 2048;  // per side of rho
};

ModeForm regular_mode_form(const ModeProblem& p, const FormOptions& opt = {});
ModeForm ab_mode_form(int m, double alpha, Spin spin, double rho = 1.0, const FormOptions& opt = {});
ModeForm mode_form(const ModeProblem& p, const FormOptions& opt = {});
RadialGrid form_grid(const ModeForm& f, double center, const FormOptions& opt = {});

struct FormMatrices {
  Tridiagonal stiffness, mass;
  std::vector<double> log_scale;  // unknown i was scaled by exp(-log_scale[i] / 2)
  std::vector<double> nodes;      // free nodes
};

// P1 elements on the grid restricted to [r_min, r_max]; essential nodes are removed.
FormMatrices assemble_mode_form(const ModeForm& form, const RadialGrid& grid);

double min_rayleigh(const Tridiagonal& stiffness, const Tridiagonal& mass);
EigenResult min_rayleigh_detailed(const Tridiagonal& stiffness, const Tridiagonal& mass);

struct ModeCheck {
  int m = 0;
  CaseTag tag = CaseTag::MZero;
  double closed_form = 0.0;
  double numeric_min = 0.0;
  double margin = 0.0;  // numeric_min - closed_form
  bool pass = false;
  // optional diagnostics
  std::vector<double> refinement;  // minima on the base grid and two nested refinements
  bool monotone = true;
  double truncation_change = 0.0;  // relative change when the interval grows a decade per side
};

inline constexpr double kModeSlack = 1e-3;
inline constexpr double kTruncationTol = 5e-3;

struct VerifyOptions {
  FormOptions form;
  bool diagnostics = false;
  RadialGrid h_grid = RadialGrid::default_grid();
  WeightOptions weights;
};

struct VerificationReport {
  std::string theorem;
  Provenance provenance = Provenance::ThmNonInteger;
  double alpha = 0.0, rho = 1.0;
  Spin spin = Spin::Plus;
  double k = 1.0, K = 1.0, beta = 1.0;  // sandwich factors of the active spin
  double bound = 0.0;                   // theorem constant
  double numeric_constant = 0.0;        // beta * min over verified modes
  bool verified = false;
  double worst_margin = 0.0;
  std::vector<ModeCheck> modes;
  std::string note;
};

ModeCheck check_mode(const ModeForm& form, CaseTag tag, double closed_form, double rho, bool diagnostics,
                     const FormOptions& opt);

VerificationReport verify_theorem(double alpha, double rho, const FieldSpec& field, std::pair<int, int> m_range,
                                  bool integer_branch, const VerifyOptions& opt = {});

struct SequenceRow {
  long long n = 0;
  double numerator = 0.0, denominator = 0.0, quotient = 0.0;
  double log_denominator = 0.0;  // against the log-corrected weight (PropL1)
};

struct ABReport {
  VerificationReport modes;
  std::vector<SequenceRow> sharpness;
  double extremal_min = 0.0;  // smallest mode minimum
  int extremal_m = 0;
};

ABReport ab_verify(double alpha, Spin spin, std::pair<int, int> m_range, const VerifyOptions& opt = {},
                   const std::vector<long long>& n_list = {100, 1000, 10000});

// Sharpness sequences.
struct TestSequence {
  enum class Kind { PropSharp, PropL1, ABSharp };
  Kind kind = Kind::PropSharp;
  long long n = 1;
  double alpha = 0.0;  // ABSharp only; the other kinds read the flux off the field
  int k = 0;           // ABSharp only
  Spin spin = Spin::Plus;
};
const char* to_string(TestSequence::Kind k);

SequenceRow evaluate_sequence(const TestSequence& seq, const FieldSpec& field);
double rayleigh_of_sequence(const TestSequence& seq, const FieldSpec& field);

// Limit of q(n) fitted as a + b / log n + c / log^2 n through the last three points.
double extrapolate_log_limit(const std::vector<long long>& n, const std::vector<double>& q);
// Least-squares slope of y against log n.
double log_slope(const std::vector<long long>& n, const std::vector<double>& y);

nlohmann::json summary_json(const VerificationReport& r);
std::string mode_csv_header();
std::string to_csv_row(const ModeCheck& c);
std::string sequence_csv_header();
std::string to_csv_row(const SequenceRow& r);

}  // namespace hardy
