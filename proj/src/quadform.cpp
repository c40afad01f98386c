#include "hardy/quadform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <limits>

#include "hardy/error.hpp"
#include "hardy/superpotential.hpp"

namespace hardy {

namespace {

[[noreturn]] void fail(ErrorKind k, const std::string& msg) { throw Error(k, "quadform", msg); }

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

Endpoint regular_essential(CaseTag t) {
  switch (t) {
    case CaseTag::MGreaterAlpha:
    case CaseTag::MEqualsAlphaInteger: return Endpoint::Inner;
    // W is not integrable at either end: a free end carries a zero-cost constant
    case CaseTag::MBetweenZeroAlpha: return Endpoint::Both;
    default: return Endpoint::Outer;
  }
}

}  // namespace

ModeForm regular_mode_form(const ModeProblem& p, const FormOptions& opt) {
  if (p.tag == CaseTag::ABPlus || p.tag == CaseTag::ABMinus)
    return ab_mode_form(p.m, p.alpha, p.tag == CaseTag::ABPlus ? Spin::Plus : Spin::Minus, p.rho, opt);
  const double a = p.alpha, lp = std::log(p.rho);
  const int m = p.m;
  ModeForm f;
  f.m = m;
  // V = g_+^2 t^{1-2m}
  f.log_top = [a, lp, m](double r) {
    double lr = std::log(r);
    return (lr > lp ? 2.0 * a * (lr - lp) : 0.0) + (1.0 - 2.0 * m) * lr;
  };
  auto top = f.log_top;
  switch (p.tag) {
    case CaseTag::MZero:
      f.log_bottom = [top, lp](double r) {
        double lr = std::log(r);
        return top(r) - log_add(2 * lr, 2 * lp);
      };
      break;
    case CaseTag::MEqualsAlphaInteger:
      f.log_bottom = [top, lp](double r) {
        double lr = std::log(r), L = lr - lp;
        return top(r) - log_add(2 * lp, 2 * lr + std::log1p(L * L));
      };
      break;
    default:
      f.log_bottom = [top](double r) { return top(r) - 2.0 * std::log(r); };
  }
  f.r_min = p.rho * std::pow(10.0, -opt.decades);
  f.r_max = p.rho * std::pow(10.0, opt.decades);
  f.essential = regular_essential(p.tag);
  return f;
}

ModeForm ab_mode_form(int m, double alpha, Spin spin, double rho, const FormOptions& opt) {
  if (spin == Spin::Both) fail(ErrorKind::InvalidArgument, "pick spin Plus or Minus");
  const double g = spin == Spin::Plus ? alpha - m : m - alpha;
  if (g == 0.0) fail(ErrorKind::CaseMismatch, "critical mode m = alpha has no Hardy bound");
  ModeForm f;
  f.m = m;
  f.log_top = [g](double r) { return (1.0 + 2.0 * g) * std::log(r); };
  f.log_bottom = [g](double r) { return (2.0 * g - 1.0) * std::log(r); };
  f.r_min = rho * std::pow(10.0, -opt.decades);
  f.r_max = rho * std::pow(10.0, opt.decades);
  f.essential = g > 0.0 ? Endpoint::Outer : Endpoint::Inner;
  return f;
}

ModeForm mode_form(const ModeProblem& p, const FormOptions& opt) { return regular_mode_form(p, opt); }

RadialGrid form_grid(const ModeForm&, double center, const FormOptions& opt) {
  return RadialGrid::centered(center, opt.decades, opt.intervals);
}

FormMatrices assemble_mode_form(const ModeForm& form, const RadialGrid& grid) {
  std::vector<double> r;
  for (double x : grid.nodes())
    if (x >= form.r_min * (1 - 1e-12) && x <= form.r_max * (1 + 1e-12)) r.push_back(x);
  if (r.size() < 2) fail(ErrorKind::InvalidArgument, "fewer than two nodes inside [r_min, r_max]");
  const RadialGrid g(r);
  const std::size_t n = r.size(), ne = n - 1;

  // per element: log of Gauss weights, V, W, and the two hat values
  struct Elem {
    double lw[4], lv[4], lb[4], lphi0[4], lphi1[4], lh;
  };
  std::vector<Elem> el(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    double rq[4], wq[4];
    g.element_rule(e, rq, wq);
    Elem& E = el[e];
    const double h = r[e + 1] - r[e];
    E.lh = std::log(h);
    int dead = 0;
    for (int q = 0; q < 4; ++q) {
      E.lw[q] = std::log(wq[q]);
      E.lv[q] = form.log_top(rq[q]);
      E.lb[q] = form.log_bottom(rq[q]);
      if (std::isnan(E.lv[q]) || std::isnan(E.lb[q]) || E.lv[q] == INFINITY || E.lb[q] == INFINITY)
        fail(ErrorKind::SingularWeight, "weight is not finite at r = " + std::to_string(rq[q]));
      if (E.lv[q] == kNegInf) ++dead;
      E.lphi0[q] = std::log((r[e + 1] - rq[q]) / h);
      E.lphi1[q] = std::log((rq[q] - r[e]) / h);
    }
    if (dead == 4)
      fail(ErrorKind::SingularWeight, "V vanishes on [" + std::to_string(r[e]) + ", " + std::to_string(r[e + 1]) + "]");
  }

  // log of the mass diagonal
  std::vector<double> s(n, kNegInf);
  for (std::size_t e = 0; e < ne; ++e)
    for (int q = 0; q < 4; ++q) {
      const Elem& E = el[e];
      s[e] = log_add(s[e], E.lw[q] + E.lb[q] + 2 * E.lphi0[q]);
      s[e + 1] = log_add(s[e + 1], E.lw[q] + E.lb[q] + 2 * E.lphi1[q]);
    }

  const std::size_t first = form.essential == Endpoint::Outer ? 0 : 1;
  const std::size_t last = form.essential == Endpoint::Inner ? n - 1 : n - 2;
  for (std::size_t i = first; i <= last; ++i)
    if (s[i] == kNegInf) fail(ErrorKind::SingularWeight, "W vanishes around r = " + std::to_string(r[i]));

  std::vector<double> kd(n, 0.0), ko(ne, 0.0), md(n, 0.0), mo(ne, 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    const Elem& E = el[e];
    const bool ok0 = s[e] != kNegInf, ok1 = s[e + 1] != kNegInf;
    const double half = 0.5 * (s[e] + s[e + 1]);
    for (int q = 0; q < 4; ++q) {
      const double kv = E.lw[q] + E.lv[q] - 2 * E.lh;
      const double mv = E.lw[q] + E.lb[q];
      if (ok0) {
        kd[e] += std::exp(kv - s[e]);
        md[e] += std::exp(mv + 2 * E.lphi0[q] - s[e]);
      }
      if (ok1) {
        kd[e + 1] += std::exp(kv - s[e + 1]);
        md[e + 1] += std::exp(mv + 2 * E.lphi1[q] - s[e + 1]);
      }
      if (ok0 && ok1) {
        ko[e] -= std::exp(kv - half);
        mo[e] += std::exp(mv + E.lphi0[q] + E.lphi1[q] - half);
      }
    }
  }

  FormMatrices out;
  for (std::size_t i = first; i <= last; ++i) {
    out.stiffness.diag.push_back(kd[i]);
    out.mass.diag.push_back(md[i]);
    out.log_scale.push_back(s[i]);
    out.nodes.push_back(r[i]);
    if (i < last) {
      out.stiffness.off.push_back(ko[i]);
      out.mass.off.push_back(mo[i]);
    }
  }
  return out;
}

EigenResult min_rayleigh_detailed(const Tridiagonal& stiffness, const Tridiagonal& mass) {
  return min_generalized_eigen(stiffness, mass, 1e-9, 10000);
}

double min_rayleigh(const Tridiagonal& stiffness, const Tridiagonal& mass) {
  return min_rayleigh_detailed(stiffness, mass).value;
}

namespace {

double solve_on(ModeForm form, const RadialGrid& grid) {
  form.r_min = grid.front();
  form.r_max = grid.back();
  auto mats = assemble_mode_form(form, grid);
  return min_rayleigh(mats.stiffness, mats.mass);
}

}  // namespace

ModeCheck check_mode(const ModeForm& form, CaseTag tag, double closed_form, double rho, bool diagnostics,
                     const FormOptions& opt) {
  ModeCheck c;
  c.m = form.m;
  c.tag = tag;
  c.closed_form = closed_form;
  const RadialGrid grid = form_grid(form, rho, opt);
  c.numeric_min = solve_on(form, grid);
  c.margin = c.numeric_min - closed_form;
  c.pass = c.numeric_min >= closed_form - kModeSlack;
  if (diagnostics) {
    const RadialGrid g2 = grid.refined();
    const RadialGrid g4 = g2.refined();
    c.refinement = {c.numeric_min, solve_on(form, g2), solve_on(form, g4)};
    c.monotone = c.refinement[1] <= c.refinement[0] * (1 + 1e-9) && c.refinement[2] <= c.refinement[1] * (1 + 1e-9);
    // one more decade per side at the same spacing (rounded up to whole intervals)
    const std::size_t extra = static_cast<std::size_t>(std::ceil(opt.intervals / opt.decades));
    const double decades = opt.decades * static_cast<double>(opt.intervals + extra) / static_cast<double>(opt.intervals);
    const double big = solve_on(form, RadialGrid::centered(rho, decades, opt.intervals + extra));
    c.truncation_change = std::abs(big - c.numeric_min) / c.numeric_min;
  }
  return c;
}

namespace {

std::vector<ModeCheck> run_modes(std::vector<std::function<ModeCheck()>> jobs) {
  std::vector<std::future<ModeCheck>> fut;
  fut.reserve(jobs.size());
  for (auto& j : jobs) fut.push_back(std::async(std::launch::async, j));
  std::vector<ModeCheck> out;
  out.reserve(jobs.size());
  for (auto& f : fut) out.push_back(f.get());
  return out;
}

void check_range(std::pair<int, int> m_range) {
  if (m_range.first > m_range.second || std::abs(m_range.first) > 64 || std::abs(m_range.second) > 64)
    fail(ErrorKind::InvalidArgument, "m_range must be ordered with |m| <= 64");
}

void summarize(VerificationReport& r) {
  r.worst_margin = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  bool all = true;
  for (const auto& m : r.modes) {
    r.worst_margin = std::min(r.worst_margin, m.margin);
    lo = std::min(lo, m.numeric_min);
    all = all && m.pass && m.monotone && m.truncation_change < kTruncationTol;
  }
  r.numeric_constant = r.beta * lo;
  r.verified = all && r.bound <= r.numeric_constant * (1 + 1e-12);
}

}  // namespace

VerificationReport verify_theorem(double alpha, double rho, const FieldSpec& field, std::pair<int, int> m_range,
                                  bool integer_branch, const VerifyOptions& opt) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorKind::InvalidArgument, "rho must be positive");
  check_range(m_range);
  const double flux = compute_flux(field);
  if (std::abs(flux - alpha) > 1e-8 * std::max(1.0, std::abs(alpha)))
    fail(ErrorKind::InvalidArgument, "alpha = " + std::to_string(alpha) + " but the field has flux " + std::to_string(flux));

  VerificationReport r;
  r.alpha = alpha;
  r.rho = rho;
  if (alpha == 0.0) {
    r.theorem = "none";
    r.verified = true;
    r.note = "alpha=0: trivial bound, no nontrivial Hardy weight";
    return r;
  }
  if (integer_branch != is_integer_flux(alpha))
    fail(ErrorKind::InvalidArgument, integer_branch ? "integer branch requested for non-integer flux"
                                                    : "integer flux needs the integer branch");

  r.spin = alpha > 0 ? Spin::Plus : Spin::Minus;
  const auto table = compute_h_radial(field, opt.h_grid);
  const auto gc = gauge_comparison(table, rho);
  const bool plus = r.spin == Spin::Plus;
  r.k = plus ? gc.k_plus : gc.k_minus;
  r.K = plus ? gc.K_plus : gc.K_minus;
  r.beta = plus ? gc.beta_plus : gc.beta_minus;
  const HardyBound hb = hardy_bound(alpha, rho, r.beta, r.spin, opt.weights);
  r.bound = hb.constant;
  r.provenance = hb.provenance;
  r.theorem = to_string(hb.provenance);

  // the minus spin is the plus spin of (-m, -alpha)
  const double a = std::abs(alpha);
  std::vector<std::function<ModeCheck()>> jobs;
  for (int m = m_range.first; m <= m_range.second; ++m) {
    const int mm = plus ? m : -m;
    jobs.push_back([=, &opt] {
      ModeProblem p = make_regular_mode(mm, a, rho);
      ModeCheck c = check_mode(regular_mode_form(p, opt.form), p.tag, mode_constant_closed_form(p), rho,
                               opt.diagnostics, opt.form);
      c.m = m;
      return c;
    });
  }
  r.modes = run_modes(std::move(jobs));
  summarize(r);
  return r;
}

ABReport ab_verify(double alpha, Spin spin, std::pair<int, int> m_range, const VerifyOptions& opt,
                   const std::vector<long long>& n_list) {
  if (!(alpha > -1.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "Aharonov-Bohm flux must lie in (-1, 1)");
  if (spin == Spin::Both) fail(ErrorKind::InvalidArgument, "pick spin Plus or Minus");
  check_range(m_range);
  ABReport out;
  VerificationReport& r = out.modes;
  r.theorem = to_string(Provenance::ThmAB);
  r.provenance = Provenance::ThmAB;
  r.alpha = alpha;
  r.spin = spin;
  if (alpha == 0.0) {
    r.verified = true;
    r.note = "alpha=0: the inequality is trivially satisfied";
    return out;
  }
  r.bound = ab_bound(alpha, spin).constant;

  std::vector<std::function<ModeCheck()>> jobs;
  for (int m = m_range.first; m <= m_range.second; ++m) {
    jobs.push_back([=, &opt] {
      ModeProblem p = make_ab_mode(m, alpha, spin);
      return check_mode(ab_mode_form(m, alpha, spin, 1.0, opt.form), p.tag, mode_constant_closed_form(p), 1.0,
                        opt.diagnostics, opt.form);
    });
  }
  r.modes = run_modes(std::move(jobs));
  summarize(r);
  out.extremal_min = std::numeric_limits<double>::infinity();
  for (const auto& m : r.modes)
    if (m.numeric_min < out.extremal_min) {
      out.extremal_min = m.numeric_min;
      out.extremal_m = m.m;
    }

  const FieldSpec field = make_ab(alpha);
  for (long long n : n_list) {
    TestSequence seq;
    seq.kind = TestSequence::Kind::ABSharp;
    seq.n = n;
    seq.alpha = alpha;
    seq.k = static_cast<int>(std::lround(alpha));
    seq.spin = spin;
    out.sharpness.push_back(evaluate_sequence(seq, field));
  }
  return out;
}

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

nlohmann::json summary_json(const VerificationReport& r) {
  nlohmann::json j;
  j["theorem"] = r.theorem;
  j["alpha"] = r.alpha;
  j["rho"] = r.rho;
  j["bound"] = r.bound;
  j["verified"] = r.verified;
  j["worst_margin"] = r.modes.empty() ? 0.0 : r.worst_margin;
  j["spin"] = to_string(r.spin);
  j["beta"] = r.beta;
  j["k"] = r.k;
  j["K"] = r.K;
  j["numeric_constant"] = r.numeric_constant;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string mode_csv_header() {
  return "m,case_tag,closed_form,numeric_min,margin,pass,monotone,truncation_change";
}

std::string to_csv_row(const ModeCheck& c) {
  return std::to_string(c.m) + "," + to_string(c.tag) + "," + num(c.closed_form) + "," + num(c.numeric_min) + "," +
         num(c.margin) + "," + (c.pass ? "true" : "false") + "," + (c.monotone ? "true" : "false") + "," +
         num(c.truncation_change);
}

std::string sequence_csv_header() { return "n,numerator,denominator,quotient,log_denominator"; }

std::string to_csv_row(const SequenceRow& r) {
  return std::to_string(r.n) + "," + num(r.numerator) + "," + num(r.denominator) + "," + num(r.quotient) + "," +
         num(r.log_denominator);
}

}  // namespace hardy
