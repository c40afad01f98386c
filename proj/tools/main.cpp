#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "config.hpp"
#include "hardy/error.hpp"
#include "run.hpp"

using namespace hardy::cli;

namespace {

// Flag values; only the flags actually given override the config file.
struct Flags {
  std::string config, output_dir, format, family, samples, spin, sequence;
  std::optional<double> alpha, R, rho, decades, tol, tau, p;
  std::optional<int> n, k;
  std::optional<std::size_t> intervals, sup_nodes;
  std::vector<int> m_range;
  std::vector<long long> n_list;
  std::vector<double> rho_list;
  bool diagnostics = false, literal = false;
};

void add_shared(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "YAML run configuration");
  sub->add_option("--output-dir", f.output_dir, "directory for report files (default $HARDY_OUTPUT_DIR)");
  sub->add_option("--format", f.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--family", f.family, "field family: bn, zero, disk, ab, samples");
  sub->add_option("--alpha", f.alpha, "flux");
  sub->add_option("--n", f.n, "bn exponent");
  sub->add_option("--R", f.R, "disk radius");
  sub->add_option("--samples", f.samples, "file of 'r b' rows");
  sub->add_option("--tau", f.tau, "claimed decay exponent");
  sub->add_option("--p", f.p, "claimed local integrability exponent");
  sub->add_option("--rho", f.rho, "weight scale");
  sub->add_option("--spin", f.spin)->check(CLI::IsMember({"plus", "minus"}));
  sub->add_option("--m-range", f.m_range, "m_min m_max")->expected(2);
  sub->add_option("--n-list", f.n_list, "sequence indices");
  sub->add_option("--rho-list", f.rho_list, "rho values");
  sub->add_option("--intervals", f.intervals, "grid intervals per side");
  sub->add_option("--decades", f.decades, "truncation decades per side");
  sub->add_option("--sup-nodes", f.sup_nodes, "nodes per sup branch");
  sub->add_option("--tol", f.tol, "tolerance");
  sub->add_option("--sequence", f.sequence, "prop_sharp, ab_sharp or prop_l1");
  sub->add_option("--k", f.k, "ab_sharp angular index");
  sub->add_flag("--diagnostics", f.diagnostics, "refinement and truncation checks");
  sub->add_flag("--literal-constants", f.literal, "printed integer-branch constant for alpha <= -1");
}

template <class T>
void set(const std::optional<T>& v, T& out) {
  if (v) out = *v;
}

RunConfig merge(Command c, const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) load_config_file(f.config, cfg);
  cfg.command = c;
  if (!f.output_dir.empty()) cfg.output_dir = f.output_dir;
  if (!f.format.empty()) cfg.format = f.format == "csv" ? Format::Csv : Format::Json;
  if (!f.family.empty()) cfg.field.family = f.family;
  if (f.alpha) cfg.field.alpha = f.alpha;
  set(f.n, cfg.field.n);
  set(f.R, cfg.field.R);
  if (!f.samples.empty()) cfg.field.samples_path = f.samples;
  set(f.tau, cfg.field.decay_exponent);
  set(f.p, cfg.field.local_integrability);
  set(f.rho, cfg.rho);
  if (!f.spin.empty()) cfg.spin = f.spin == "minus" ? hardy::Spin::Minus : hardy::Spin::Plus;
  if (f.m_range.size() == 2) cfg.m_range = {f.m_range[0], f.m_range[1]};
  if (!f.n_list.empty()) cfg.n_list = f.n_list;
  if (!f.rho_list.empty()) cfg.rho_list = f.rho_list;
  set(f.intervals, cfg.intervals);
  set(f.decades, cfg.decades);
  set(f.sup_nodes, cfg.sup_nodes);
  set(f.tol, cfg.tol);
  if (!f.sequence.empty()) cfg.sequence = f.sequence;
  set(f.k, cfg.k);
  if (f.diagnostics) cfg.diagnostics = true;
  if (f.literal) cfg.literal_constants = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hardy-cli: planar magnetic Hardy weights and their checks"};
  app.require_subcommand(1);
  Flags flags;
  const char* names[] = {"flux", "superpotential", "beta", "weight", "muckenhoupt",
                         "verify", "sharpness", "ab", "l1demo", "sweep"};
  std::vector<CLI::App*> subs;
  for (const char* n : names) {
    auto* s = app.add_subcommand(n);
    add_shared(s, flags);
    subs.push_back(s);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  std::string chosen;
  for (auto* s : subs)
    if (s->parsed()) chosen = s->get_name();
  try {
    RunConfig cfg = merge(parse_command(chosen), flags);
    return run(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
