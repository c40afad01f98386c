#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "hardy/field.hpp"

namespace hardy::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

struct SweepRow {
  double rho = 1.0;
  double beta_plus = 1.0;
  double bound = 0.0;
  std::string theorem;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  double slope = 0.0;  // log beta_+ against log rho over rho <= 0.1 (all rows if fewer than two); nan with one row
};

SweepTable sweep_rho(const FieldSpec& field, const std::vector<double>& rhos, const WeightOptions& opt = {});

// Output directory: the config value, else $HARDY_OUTPUT_DIR, else none (stdout only).
std::string output_dir(const RunConfig& cfg);

// Runs one command: the summary (json) or main table (csv) goes to `out`,
// report files to the output directory. Returns the exit status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Maps a library error to an exit status.
int exit_code_for(const std::exception& e);

}  // namespace hardy::cli
