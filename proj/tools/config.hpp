#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hardy/field.hpp"
#include "hardy/weights.hpp"

namespace hardy::cli {

enum class Command { Flux, Superpotential, Beta, Weight, Muckenhoupt, Verify, Sharpness, AB, L1Demo, Sweep };
enum class Format { Csv, Json };

const char* to_string(Command c);
Command parse_command(const std::string& s);

// Field description shared by the config file and the flags.
struct FieldConfig {
  std::string family = "bn";  // bn, zero, disk, ab, samples
  std::optional<double> alpha;
  int n = 8;                  // bn exponent
  double R = 1.0;             // disk radius
  std::string samples_path;   // two columns r b
  double decay_exponent = 3.0;
  double local_integrability = 4.0;
};

struct RunConfig {
  Command command = Command::Verify;
  std::string field_config_path;
  std::string output_dir;
  Format format = Format::Json;
  FieldConfig field;

  // numeric overrides
  std::size_t intervals = 2048;
  double decades = 30.0;
  std::size_t sup_nodes = 512;
  double tol = 1e-9;  // agreement of the given alpha with the computed flux
  std::pair<int, int> m_range{-3, 5};
  std::vector<long long> n_list{100, 1000, 10000};
  std::vector<double> rho_list{0.5, 1.0, 2.0};
  double rho = 1.0;
  Spin spin = Spin::Plus;
  std::string sequence = "prop_sharp";  // prop_sharp, ab_sharp, prop_l1
  int k = 0;
  bool diagnostics = false;
  bool literal_constants = false;
};

// Fills cfg from a YAML file; keys mirror the flag names. Throws ConfigError
// naming the line and the offending key.
void load_config_file(const std::string& path, RunConfig& cfg);

// Checks the invariants (positive tolerances, |m| <= 64, ...); throws ConfigError.
void validate(const RunConfig& cfg);

FieldSpec build_field(const FieldConfig& fc);

}  // namespace hardy::cli
