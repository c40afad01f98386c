#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hardy/error.hpp"

namespace hardy::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, "cli", msg); }

struct CommandName {
  Command c;
  const char* name;
};
constexpr CommandName kCommands[] = {
    {Command::Flux, "flux"},       {Command::Superpotential, "superpotential"},
    {Command::Beta, "beta"},       {Command::Weight, "weight"},
    {Command::Muckenhoupt, "muckenhoupt"}, {Command::Verify, "verify"},
    {Command::Sharpness, "sharpness"},     {Command::AB, "ab"},
    {Command::L1Demo, "l1demo"},   {Command::Sweep, "sweep"},
};

std::string where(const YAML::Node& n, const std::string& key) {
  auto m = n.Mark();
  return "config line " + std::to_string(m.line + 1) + ", key '" + key + "'";
}

template <class T>
void read(const YAML::Node& parent, const char* key, T& out) {
  const YAML::Node n = parent[key];
  if (!n) return;
  try {
    out = n.as<T>();
  } catch (const YAML::Exception& e) {
    fail(where(n, key) + ": " + e.msg);
  }
}

Spin parse_spin(const YAML::Node& n, const std::string& s) {
  if (s == "plus") return Spin::Plus;
  if (s == "minus") return Spin::Minus;
  fail(where(n, "spin") + ": expected plus or minus, got '" + s + "'");
}

}  // namespace

const char* to_string(Command c) {
  for (const auto& x : kCommands)
    if (x.c == c) return x.name;
  return "?";
}

Command parse_command(const std::string& s) {
  for (const auto& x : kCommands)
    if (s == x.name) return x.c;
  fail("unknown command '" + s + "'");
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    fail("cannot read config file " + path);
  } catch (const YAML::Exception& e) {
    fail("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) fail("config " + path + ": top level must be a mapping");

  if (const YAML::Node f = root["field"]) {
    if (!f.IsMap()) fail(where(f, "field") + ": expected a mapping");
    read(f, "family", cfg.field.family);
    if (f["alpha"]) {
      double a = 0.0;
      read(f, "alpha", a);
      cfg.field.alpha = a;
    }
    read(f, "n", cfg.field.n);
    read(f, "R", cfg.field.R);
    read(f, "samples", cfg.field.samples_path);
    read(f, "decay_exponent", cfg.field.decay_exponent);
    read(f, "local_integrability", cfg.field.local_integrability);
    if (!cfg.field.samples_path.empty() && cfg.field.samples_path.front() != '/') {
      // relative to the config file
      auto slash = path.find_last_of('/');
      if (slash != std::string::npos) cfg.field.samples_path = path.substr(0, slash + 1) + cfg.field.samples_path;
    }
  }
  if (root["command"]) {
    std::string c;
    read(root, "command", c);
    cfg.command = parse_command(c);
  }
  if (root["format"]) {
    std::string s;
    read(root, "format", s);
    if (s == "csv") cfg.format = Format::Csv;
    else if (s == "json") cfg.format = Format::Json;
    else fail(where(root["format"], "format") + ": expected csv or json");
  }
  read(root, "output_dir", cfg.output_dir);
  read(root, "intervals", cfg.intervals);
  read(root, "decades", cfg.decades);
  read(root, "sup_nodes", cfg.sup_nodes);
  read(root, "tol", cfg.tol);
  if (const YAML::Node m = root["m_range"]) {
    std::vector<int> v;
    read(root, "m_range", v);
    if (v.size() != 2) fail(where(m, "m_range") + ": expected [m_min, m_max]");
    cfg.m_range = {v[0], v[1]};
  }
  read(root, "n_list", cfg.n_list);
  read(root, "rho_list", cfg.rho_list);
  read(root, "rho", cfg.rho);
  if (root["spin"]) {
    std::string s;
    read(root, "spin", s);
    cfg.spin = parse_spin(root["spin"], s);
  }
  read(root, "sequence", cfg.sequence);
  read(root, "k", cfg.k);
  read(root, "diagnostics", cfg.diagnostics);
  read(root, "literal_constants", cfg.literal_constants);
}

void validate(const RunConfig& c) {
  if (!(c.tol > 0.0) || !std::isfinite(c.tol)) fail("tol must be positive");
  if (!(c.decades > 0.0) || !std::isfinite(c.decades)) fail("decades must be positive");
  if (c.intervals < 2) fail("intervals must be at least 2");
  if (c.sup_nodes < 8) fail("sup_nodes must be at least 8");
  if (c.m_range.first > c.m_range.second) fail("m_range must be ordered");
  if (std::abs(c.m_range.first) > 64 || std::abs(c.m_range.second) > 64) fail("m_range must satisfy |m| <= 64");
  if (!(c.rho > 0.0) || !std::isfinite(c.rho)) fail("rho must be positive and finite");
  if (c.rho_list.empty()) fail("rho_list is empty");
  for (double r : c.rho_list)
    if (!(r > 0.0) || !std::isfinite(r)) fail("rho_list entries must be positive and finite");
  if (c.n_list.empty()) fail("n_list is empty");
  for (long long n : c.n_list)
    if (n < 1) fail("n_list entries must be positive");
  if (c.sequence != "prop_sharp" && c.sequence != "ab_sharp" && c.sequence != "prop_l1")
    fail("sequence must be prop_sharp, ab_sharp or prop_l1");
  if (!(c.field.R > 0.0)) fail("field R must be positive");
}

FieldSpec build_field(const FieldConfig& fc) {
  const std::string& fam = fc.family;
  auto need_alpha = [&fc, &fam]() {
    if (!fc.alpha) fail("field family '" + fam + "' needs alpha");
    return *fc.alpha;
  };
  FieldSpec f;
  if (fam == "bn") {
    if (fc.n < 0) fail("bn exponent n must be nonnegative");
    f = make_bn(need_alpha(), fc.n);
  } else if (fam == "zero") {
    f = make_zero_field();
  } else if (fam == "ab") {
    f = make_ab(need_alpha());
  } else if (fam == "disk") {
    // constant b = 2 alpha / R^2 on (0, R)
    const double a = need_alpha(), R = fc.R, c = 2 * a / (R * R);
    f = make_radial(RadialProfile::from_function([c, R](double r) { return r < R ? c : 0.0; },
                                                 RadialGrid::default_grid(), {R}),
                    fc.decay_exponent, fc.local_integrability);
  } else if (fam == "samples") {
    std::ifstream in(fc.samples_path);
    if (!in) fail("cannot read samples file '" + fc.samples_path + "'");
    std::vector<double> r, b;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      double x, y;
      if (!(ls >> x >> y)) fail(fc.samples_path + " line " + std::to_string(lineno) + ": expected 'r b'");
      r.push_back(x);
      b.push_back(y);
    }
    if (r.size() < 2) fail(fc.samples_path + ": need at least two samples");
    f = make_radial(RadialProfile::from_samples(RadialGrid(r), b), fc.decay_exponent, fc.local_integrability);
  } else {
    fail("unknown field family '" + fam + "' (bn, zero, disk, ab, samples)");
  }
  f.decay_exponent = fc.decay_exponent;
  f.local_integrability = fc.local_integrability;
  hardy::validate(f);
  if (fc.alpha && fam != "zero") {
    double a = compute_flux(f);
    if (std::abs(a - *fc.alpha) > 1e-8 * std::max(1.0, std::abs(a)) && fam == "samples")
      fail("samples have flux " + std::to_string(a) + ", config says alpha = " + std::to_string(*fc.alpha));
  }
  return f;
}

}  // namespace hardy::cli
