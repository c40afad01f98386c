#include "run.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "hardy/error.hpp"
#include "hardy/muckenhoupt.hpp"
#include "hardy/quadform.hpp"
#include "hardy/superpotential.hpp"
#include "json.hpp"

namespace hardy::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Collects the report of one command.
struct Report {
  json summary;
  std::string table;  // main CSV
  std::vector<std::pair<std::string, std::string>> files;  // extra name -> content
  int status = kExitPass;
};

double field_alpha(const RunConfig& cfg, const FieldSpec& f) {
  double a = compute_flux(f);
  if (cfg.field.alpha && std::abs(*cfg.field.alpha - a) > cfg.tol * std::max(1.0, std::abs(a)))
    throw Error(ErrorKind::InvalidArgument, "cli",
                "alpha = " + num(*cfg.field.alpha) + " but the field has flux " + num(a));
  return a;
}

VerifyOptions verify_options(const RunConfig& cfg) {
  VerifyOptions o;
  o.form.intervals = cfg.intervals;
  o.form.decades = cfg.decades;
  o.diagnostics = cfg.diagnostics;
  o.weights.literal_constants = cfg.literal_constants;
  return o;
}

Report do_flux(const RunConfig&, const FieldSpec& f) {
  Report r;
  auto ff = flux_function(f, RadialGrid::default_grid());
  std::string t = "r,Phi\n";
  for (std::size_t i = 0; i < ff.values.size(); ++i) t += num(ff.grid[i]) + "," + num(ff.values[i]) + "\n";
  r.table = t;
  r.summary = {{"command", "flux"}, {"field", f.kind_name()}, {"alpha", ff.total_flux}};
  auto d = radial_density(f);
  r.summary["support"] = num_or_null(d.support);
  return r;
}

Report do_superpotential(const RunConfig&, const FieldSpec& f) {
  Report r;
  auto t = compute_h_radial(f);
  std::string csv = "r,h,Phi\n";
  for (std::size_t i = 0; i < t.r.size(); ++i) csv += num(t.r[i]) + "," + num(t.h[i]) + "," + num(t.flux[i]) + "\n";
  r.table = csv;
  std::ostringstream os;
  export_table(t, os);
  r.files.push_back({"superpotential.txt", os.str()});
  r.summary = {{"command", "superpotential"}, {"alpha", t.alpha}, {"h_origin", t.h_origin},
               {"tail_start", t.tail_start}, {"tail_exponent", t.tail_exponent}, {"compact", t.compact}};
  return r;
}

Report do_beta(const RunConfig& cfg, const FieldSpec& f) {
  Report r;
  auto t = compute_h_radial(f);
  auto g = gauge_comparison(t, cfg.rho);
  r.summary = {{"command", "beta"}, {"rho", g.rho},       {"alpha", g.alpha},
               {"k_plus", g.k_plus}, {"K_plus", g.K_plus}, {"k_minus", g.k_minus},
               {"K_minus", g.K_minus}, {"beta_plus", g.beta_plus}, {"beta_minus", g.beta_minus},
               {"r_k_plus", num_or_null(g.r_k_plus)}, {"r_K_plus", num_or_null(g.r_K_plus)}};
  auto d = radial_density(f);
  if (d.compact()) {
    r.summary["R"] = d.support;
    r.summary["lambda_R"] = lambda_R(f, d.support);
  }
  r.table = "rho,alpha,k_plus,K_plus,k_minus,K_minus,beta_plus,beta_minus\n" + num(g.rho) + "," + num(g.alpha) + "," +
            num(g.k_plus) + "," + num(g.K_plus) + "," + num(g.k_minus) + "," + num(g.K_minus) + "," +
            num(g.beta_plus) + "," + num(g.beta_minus) + "\n";
  return r;
}

Report do_weight(const RunConfig& cfg, const FieldSpec& f) {
  Report r;
  const double a = field_alpha(cfg, f);
  WeightOptions wo;
  wo.literal_constants = cfg.literal_constants;
  HardyBound b;
  if (std::holds_alternative<AharonovBohm>(f.kind)) {
    b = ab_bound(a, cfg.spin);
  } else {
    double beta = 1.0;
    if (a != 0.0) {
      auto g = gauge_comparison(compute_h_radial(f), cfg.rho);
      beta = a > 0 ? g.beta_plus : g.beta_minus;
    }
    b = hardy_bound(a, cfg.rho, beta, a < 0 ? Spin::Minus : Spin::Plus, wo);
  }
  r.summary = to_json(b);
  r.summary["command"] = "weight";
  r.summary["alpha"] = a;
  if (a == 0.0) r.summary["note"] = "alpha=0: trivial bound";
  std::string t = "x,w\n";
  for (int i = 0; i <= 60; ++i) {
    double x = std::pow(10.0, -3.0 + 0.1 * i) * cfg.rho;
    t += num(x) + "," + num(b.evaluate(x)) + "\n";
  }
  r.table = t;
  return r;
}

Report do_muckenhoupt(const RunConfig& cfg, const FieldSpec& f) {
  Report r;
  const double a = std::abs(field_alpha(cfg, f));
  SupOptions so;
  so.nodes_per_branch = cfg.sup_nodes;
  std::string t = case_csv_header() + "\n";
  int cases = 0, failures = 0;
  for (double rho : cfg.rho_list)
    for (int m = cfg.m_range.first; m <= cfg.m_range.second; ++m) {
      ModeProblem p = std::holds_alternative<AharonovBohm>(f.kind) ? make_ab_mode(m, field_alpha(cfg, f), cfg.spin, rho)
                                                                   : make_regular_mode(m, a, rho);
      auto c = verify_case_sup(p, so);
      t += to_csv_row(c) + "\n";
      ++cases;
      if (!c.pass) ++failures;
    }
  r.table = t;
  r.summary = {{"command", "muckenhoupt"}, {"alpha", a}, {"cases", cases}, {"failures", failures},
               {"pass", failures == 0}};
  r.status = failures == 0 ? kExitPass : kExitFail;
  return r;
}

Report do_verify(const RunConfig& cfg, const FieldSpec& f) {
  Report r;
  const double a = field_alpha(cfg, f);
  auto rep = verify_theorem(a, cfg.rho, f, cfg.m_range, is_integer_flux(a), verify_options(cfg));
  std::string t = mode_csv_header() + "\n";
  for (const auto& m : rep.modes) t += to_csv_row(m) + "\n";
  r.table = t;
  r.summary = summary_json(rep);
  r.summary["command"] = "verify";
  r.status = rep.verified ? kExitPass : kExitFail;
  return r;
}

std::string sequence_table(const std::vector<SequenceRow>& rows) {
  std::string t = sequence_csv_header() + "\n";
  for (const auto& s : rows) t += to_csv_row(s) + "\n";
  return t;
}

Report do_sharpness(const RunConfig& cfg, const FieldSpec& f) {
  Report r;
  TestSequence seq;
  double target = 0.0;
  const double a = field_alpha(cfg, f);
  if (cfg.sequence == "prop_sharp") {
    seq.kind = TestSequence::Kind::PropSharp;
    target = a * a;
  } else if (cfg.sequence == "ab_sharp") {
    seq.kind = TestSequence::Kind::ABSharp;
    seq.k = cfg.k;
    seq.spin = cfg.spin;
    target = (a - cfg.k) * (a - cfg.k);
  } else {
    seq.kind = TestSequence::Kind::PropL1;
  }
  std::vector<SequenceRow> rows;
  std::vector<double> q;
  for (long long n : cfg.n_list) {
    seq.n = n;
    rows.push_back(evaluate_sequence(seq, f));
    q.push_back(rows.back().quotient);
  }
  r.table = sequence_table(rows);
  r.summary = {{"command", "sharpness"}, {"sequence", to_string(seq.kind)}, {"alpha", a}, {"target", target}};
  r.summary["extrapolated"] = cfg.n_list.size() >= 3 ? json(extrapolate_log_limit(cfg.n_list, q)) : json(nullptr);
  r.summary["last_quotient"] = q.back();
  return r;
}

Report do_ab(const RunConfig& cfg, const FieldSpec& f) {
  Report r;
  const double a = field_alpha(cfg, f);
  auto rep = ab_verify(a, cfg.spin, cfg.m_range, verify_options(cfg), a == 0.0 ? std::vector<long long>{} : cfg.n_list);
  std::string t = mode_csv_header() + "\n";
  for (const auto& m : rep.modes.modes) t += to_csv_row(m) + "\n";
  r.table = t;
  r.files.push_back({"ab_sharpness.csv", sequence_table(rep.sharpness)});
  r.summary = summary_json(rep.modes);
  r.summary["command"] = "ab";
  if (!rep.modes.modes.empty()) {
    r.summary["extremal_m"] = rep.extremal_m;
    r.summary["extremal_min"] = rep.extremal_min;
  }
  json sh = json::array();
  for (const auto& s : rep.sharpness) sh.push_back({{"n", s.n}, {"quotient", s.quotient}});
  r.summary["sharpness"] = sh;
  r.status = rep.modes.verified ? kExitPass : kExitFail;
  return r;
}

Report do_l1demo(const RunConfig& cfg, const FieldSpec& f) {
  Report r;
  const double a = field_alpha(cfg, f);
  TestSequence seq;
  seq.kind = TestSequence::Kind::PropL1;
  std::vector<SequenceRow> rows;
  std::vector<double> num_v, den, q;
  for (long long n : cfg.n_list) {
    seq.n = n;
    rows.push_back(evaluate_sequence(seq, f));
    num_v.push_back(rows.back().numerator);
    den.push_back(rows.back().denominator);
    q.push_back(rows.back().quotient);
  }
  r.table = sequence_table(rows);
  double change = 0.0;
  for (double v : num_v) change = std::max(change, std::abs(v - num_v.front()) / num_v.front());
  r.summary = {{"command", "l1demo"}, {"alpha", a}, {"numerator_max_change", change}};
  r.summary["denominator_slope"] = cfg.n_list.size() >= 2 ? json(log_slope(cfg.n_list, den)) : json(nullptr);
  r.summary["numerator_slope"] = cfg.n_list.size() >= 2 ? json(log_slope(cfg.n_list, num_v)) : json(nullptr);
  r.summary["quotient_limit"] = cfg.n_list.size() >= 3 ? json(extrapolate_log_limit(cfg.n_list, q)) : json(nullptr);
  return r;
}

Report do_sweep(const RunConfig& cfg, const FieldSpec& f) {
  Report r;
  WeightOptions wo;
  wo.literal_constants = cfg.literal_constants;
  auto s = sweep_rho(f, cfg.rho_list, wo);
  std::string t = "rho,beta_plus,bound,theorem,beta_slope\n";
  for (const auto& row : s.rows)
    t += num(row.rho) + "," + num(row.beta_plus) + "," + num(row.bound) + "," + row.theorem + "," + num(s.slope) + "\n";
  r.table = t;
  r.summary = {{"command", "sweep"}, {"rows", s.rows.size()}, {"beta_slope", num_or_null(s.slope)}};
  return r;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream o(p, std::ios::binary);
  if (!o) throw Error(ErrorKind::InvalidArgument, "cli", "cannot write " + p.string());
  o << content;
}

}  // namespace

SweepTable sweep_rho(const FieldSpec& field, const std::vector<double>& rhos, const WeightOptions& opt) {
  SweepTable s;
  if (rhos.empty()) throw Error(ErrorKind::InvalidArgument, "cli", "empty rho grid");
  const auto t = compute_h_radial(field);
  const double a = t.alpha;
  for (double rho : rhos) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorKind::InvalidArgument, "cli", "rho must be positive");
    auto g = gauge_comparison(t, rho);
    SweepRow row;
    row.rho = rho;
    row.beta_plus = g.beta_plus;
    auto b = hardy_bound(a, rho, a < 0 ? g.beta_minus : g.beta_plus, a < 0 ? Spin::Minus : Spin::Plus, opt);
    row.bound = b.constant;
    row.theorem = to_string(b.provenance);
    s.rows.push_back(row);
  }
  std::vector<double> x, y;
  for (const auto& row : s.rows)
    if (row.rho <= 0.1) {
      x.push_back(std::log(row.rho));
      y.push_back(std::log(row.beta_plus));
    }
  if (x.size() < 2) {
    x.clear();
    y.clear();
    for (const auto& row : s.rows) {
      x.push_back(std::log(row.rho));
      y.push_back(std::log(row.beta_plus));
    }
  }
  if (x.size() < 2) {
    s.slope = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  s.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return s;
}

std::string output_dir(const RunConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* e = std::getenv("HARDY_OUTPUT_DIR")) return e;
  return {};
}

int exit_code_for(const std::exception& e) {
  if (const auto* he = dynamic_cast<const Error*>(&e)) {
    switch (he->kind()) {
      case ErrorKind::NoConvergence:
      case ErrorKind::TailUnresolved:
      case ErrorKind::DivergentProduct:
      case ErrorKind::SingularWeight: return kExitFail;
      default: return kExitInput;
    }
  }
  return kExitInput;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    const FieldSpec f = build_field(cfg.field);
    Report r;
    switch (cfg.command) {
      case Command::Flux: r = do_flux(cfg, f); break;
      case Command::Superpotential: r = do_superpotential(cfg, f); break;
      case Command::Beta: r = do_beta(cfg, f); break;
      case Command::Weight: r = do_weight(cfg, f); break;
      case Command::Muckenhoupt: r = do_muckenhoupt(cfg, f); break;
      case Command::Verify: r = do_verify(cfg, f); break;
      case Command::Sharpness: r = do_sharpness(cfg, f); break;
      case Command::AB: r = do_ab(cfg, f); break;
      case Command::L1Demo: r = do_l1demo(cfg, f); break;
      case Command::Sweep: r = do_sweep(cfg, f); break;
    }
    const std::string summary = r.summary.dump(2) + "\n";
    out << (cfg.format == Format::Json ? summary : r.table);
    const std::string dir = output_dir(cfg);
    if (!dir.empty()) {
      std::filesystem::create_directories(dir);
      const std::string stem = to_string(cfg.command);
      write_file(std::filesystem::path(dir) / (stem + ".json"), summary);
      write_file(std::filesystem::path(dir) / (stem + ".csv"), r.table);
      for (const auto& [name, content] : r.files) write_file(std::filesystem::path(dir) / name, content);
    }
    return r.status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace hardy::cli
