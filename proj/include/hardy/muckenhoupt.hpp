#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hardy/field.hpp"
#include "hardy/weights.hpp"

namespace hardy {

enum class Side {
  VanishAtInfinity,  // sup_s (int_s^b 1/V)(int_a^s W)
  VanishAtZero,      // sup_s (int_a^s 1/V)(int_s^b W)
};

struct WeightPair {
  std::function<double(double)> V, W;
  double a = 0.0, b = kInf;
  Side side = Side::VanishAtInfinity;
  std::vector<double> breakpoints;  // split points of the s-search inside (a, b)
  double scale = 1.0;               // characteristic length for open-end cut-offs
  // optional exact integrals toward the open end: int of 1/V and of W
  // between the open end and T
  std::function<double(double)> inv_v_tail, w_tail;
};

struct BranchSup {
  double lo = 0.0, hi = 0.0;
  double sup = 0.0;
  double argmax = 0.0;
};

struct SupResult {
  double sup = 0.0;
  double argmax = 0.0;
  double bound = 0.0;  // 4 sup
  bool extrapolated = false;
  std::vector<BranchSup> branches;
};

struct SupOptions {
  std::size_t nodes_per_branch = 512;
  double decades = 8.0;  // open ends cut at scale * 10^{-+decades}
  double rel_tol = 1e-13;
};

SupResult muckenhoupt_sup_detailed(const WeightPair& pair, const SupOptions& opt = {});
double muckenhoupt_sup(const WeightPair& pair, const SupOptions& opt = {});

enum class CaseTag { MGreaterAlpha, MZero, MNegative, MBetweenZeroAlpha, MEqualsAlphaInteger, ABPlus, ABMinus };
const char* to_string(CaseTag t);

struct ModeProblem {
  int m = 0;
  double alpha = 0.0;
  double rho = 1.0;
  CaseTag tag = CaseTag::MZero;
  // one pair, or the (0, rho) and (rho, inf) pieces for MBetweenZeroAlpha
  std::vector<WeightPair> pairs;
};

CaseTag classify_regular(int m, double alpha);
// Builds the problem for the given tag; throws CaseMismatch when (m, alpha) disagrees.
ModeProblem make_mode(int m, double alpha, double rho, CaseTag tag);
ModeProblem make_regular_mode(int m, double alpha, double rho);
ModeProblem make_ab_mode(int m, double alpha, Spin spin, double rho = 1.0);

double mode_constant_closed_form(const ModeProblem& p);

struct BranchCheck {
  std::string label;
  double numeric = 0.0;
  double printed = 0.0;
  bool equality = false;  // printed value is claimed exact
  bool pass = false;
};

struct CaseReport {
  CaseTag tag = CaseTag::MZero;
  int m = 0;
  double alpha = 0.0, rho = 1.0;
  double numeric_sup = 0.0;
  double stated_bound = 0.0;
  double derived_constant = 0.0;  // 1/(4 sup)
  double closed_form = 0.0;
  bool pass = false;
  std::vector<BranchCheck> branches;
};

inline constexpr double kCaseSlack = 1e-6;

CaseReport verify_case_sup(const ModeProblem& p, const SupOptions& opt = {});

std::string case_csv_header();
std::string to_csv_row(const CaseReport& r);

}  // namespace hardy
