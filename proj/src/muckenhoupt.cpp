#include "hardy/muckenhoupt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "hardy/error.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/superpotential.hpp"

namespace hardy {

namespace {

[[noreturn]] void fail(ErrorKind k, const std::string& msg) { throw Error(k, "muckenhoupt", msg); }

using Fn = std::function<double(double)>;

// power-law estimate of int_0^T f (toward_zero) or int_T^inf f
double open_end(const Fn& f, double T, bool toward_zero, const char* what) {
  const double f0 = f(T);
  if (f0 == 0.0) return 0.0;
  const double f1 = toward_zero ? f(0.5 * T) : f(2.0 * T);
  if (!std::isfinite(f0) || !std::isfinite(f1) || f1 <= 0.0 || f0 < 0.0)
    fail(ErrorKind::DivergentProduct, std::string(what) + " is not positive and finite near the open end");
  double p = std::log(toward_zero ? f0 / f1 : f1 / f0) / std::log(2.0);
  if (toward_zero) {
    if (p <= -1.0 + 1e-6) fail(ErrorKind::DivergentProduct, std::string(what) + " is not integrable at 0");
    return f0 * T / (p + 1.0);
  }
  if (p >= -1.0 - 1e-6) fail(ErrorKind::DivergentProduct, std::string(what) + " is not integrable at infinity");
  return f0 * T / (-p - 1.0);
}

struct Engine {
  const WeightPair& pair;
  const SupOptions& opt;
  Fn inv_v, w;
  std::vector<double> s;
  std::vector<double> IV, IW;  // the two factors at the nodes
  bool iv_from_a = false;      // IV = int_a^s 1/V (VanishAtZero) or int_s^b 1/V
  double lo = 0, hi = 0;

  Engine(const WeightPair& p, const SupOptions& o) : pair(p), opt(o) {
    auto V = p.V;
    inv_v = [V](double t) {
      double v = V(t);
      return v > 0.0 && std::isfinite(v) ? 1.0 / v : INFINITY;
    };
    w = p.W;
    iv_from_a = p.side == Side::VanishAtZero;
  }

  double seg(const Fn& f, double x0, double x1) const {
    quad::Options q;
    q.rel_tol = opt.rel_tol;
    q.abs_tol = 0.0;
    double v = quad::integrate(f, x0, x1, q);
    if (!std::isfinite(v)) fail(ErrorKind::DivergentProduct, "weight integral is not finite");
    return v;
  }

  // int_a^{lo} f
  double head(const Fn& f, const Fn& tail, const char* what) const {
    if (pair.a > 0.0) return 0.0;
    return tail ? tail(lo) : open_end(f, lo, true, what);
  }
  // int_{hi}^b f
  double rear(const Fn& f, const Fn& tail, const char* what) const {
    if (std::isfinite(pair.b)) return 0.0;
    return tail ? tail(hi) : open_end(f, hi, false, what);
  }

  std::vector<double> from_a(const Fn& f, const Fn& tail, const char* what) const {
    std::vector<double> out(s.size());
    out[0] = head(f, tail, what);
    for (std::size_t i = 1; i < s.size(); ++i) out[i] = out[i - 1] + seg(f, s[i - 1], s[i]);
    return out;
  }
  std::vector<double> to_b(const Fn& f, const Fn& tail, const char* what) const {
    std::vector<double> out(s.size());
    out.back() = rear(f, tail, what);
    for (std::size_t i = s.size() - 1; i-- > 0;) out[i] = out[i + 1] + seg(f, s[i], s[i + 1]);
    return out;
  }

  double product_at(double x) const {
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t k = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    if (k + 1 >= s.size()) k = s.size() - 2;
    double iv, iw;
    if (iv_from_a) {
      iv = IV[k] + seg(inv_v, s[k], x);
      iw = IW[k + 1] + seg(w, x, s[k + 1]);
    } else {
      iv = IV[k + 1] + seg(inv_v, x, s[k + 1]);
      iw = IW[k] + seg(w, s[k], x);
    }
    return iv * iw;
  }
};

}  // namespace

SupResult muckenhoupt_sup_detailed(const WeightPair& pair, const SupOptions& opt) {
  if (!pair.V || !pair.W) fail(ErrorKind::InvalidArgument, "weight callbacks are missing");
  if (!(pair.a >= 0.0) || !(pair.b > pair.a)) fail(ErrorKind::InvalidArgument, "interval must satisfy 0 <= a < b");
  Engine e(pair, opt);
  const double cut = std::pow(10.0, opt.decades);
  e.lo = pair.a > 0.0 ? pair.a : pair.scale / cut;
  e.hi = std::isfinite(pair.b) ? pair.b : pair.scale * cut;
  if (!(e.hi > e.lo)) fail(ErrorKind::InvalidArgument, "empty search range");

  std::vector<double> edges{e.lo};
  for (double bp : pair.breakpoints)
    if (bp > e.lo && bp < e.hi) edges.push_back(bp);
  std::sort(edges.begin() + 1, edges.end());
  edges.push_back(e.hi);

  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  const std::size_t K = std::max<std::size_t>(opt.nodes_per_branch, 3);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    std::size_t first = e.s.empty() ? 0 : e.s.size() - 1;
    double l0 = std::log(edges[b]), l1 = std::log(edges[b + 1]);
    for (std::size_t i = e.s.empty() ? 0 : 1; i < K; ++i)
      e.s.push_back(i + 1 == K ? edges[b + 1] : std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (K - 1)));
    e.s[first] = edges[b];
    ranges.push_back({first, e.s.size() - 1});
  }

  if (e.iv_from_a) {
    e.IV = e.from_a(e.inv_v, pair.inv_v_tail, "1/V");
    e.IW = e.to_b(e.w, pair.w_tail, "W");
  } else {
    e.IV = e.to_b(e.inv_v, pair.inv_v_tail, "1/V");
    e.IW = e.from_a(e.w, pair.w_tail, "W");
  }
  std::vector<double> P(e.s.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    P[i] = e.IV[i] * e.IW[i];
    if (!std::isfinite(P[i])) fail(ErrorKind::DivergentProduct, "product is not finite at s = " + std::to_string(e.s[i]));
  }

  SupResult out;
  for (auto [first, last] : ranges) {
    BranchSup br;
    br.lo = e.s[first];
    br.hi = e.s[last];
    std::size_t j = first;
    for (std::size_t i = first; i <= last; ++i)
      if (P[i] > P[j]) j = i;
    br.sup = P[j];
    br.argmax = e.s[j];
    if (j > first && j < last) {
      auto f = [&e](double x) { return -e.product_at(std::exp(x)); };
      auto res = boost::math::tools::brent_find_minima(f, std::log(e.s[j - 1]), std::log(e.s[j + 1]), 40);
      if (-res.second > br.sup) {
        br.sup = -res.second;
        br.argmax = std::exp(res.first);
      }
    }
    // maximum at an open end: extrapolate a geometric approach, reject growth
    bool at_zero = j == 0 && pair.a == 0.0;
    bool at_inf = j == e.s.size() - 1 && !std::isfinite(pair.b);
    if (at_zero || at_inf) {
      double end = e.s[j];
      double f1 = at_zero ? 10.0 : 0.1;
      double in1 = end * f1, in2 = end * f1 * f1;
      if (in2 >= br.lo && in2 <= br.hi && in1 >= br.lo && in1 <= br.hi) {
        double p0 = P[j], p1 = e.product_at(in1), p2 = e.product_at(in2);
        double d1 = p0 - p1, d2 = p1 - p2;
        if (d1 > 1e-12 * std::abs(p0) && d2 > 0.0) {
          double q = d1 / d2;
          if (q >= 0.99) fail(ErrorKind::DivergentProduct, "product keeps growing toward the open end");
          br.sup = p0 + d1 * q / (1.0 - q);
          out.extrapolated = true;
        }
      }
    }
    out.branches.push_back(br);
  }
  out.sup = 0.0;
  for (const auto& br : out.branches)
    if (br.sup > out.sup) {
      out.sup = br.sup;
      out.argmax = br.argmax;
    }
  out.bound = 4.0 * out.sup;
  return out;
}

double muckenhoupt_sup(const WeightPair& pair, const SupOptions& opt) {
  return muckenhoupt_sup_detailed(pair, opt).sup;
}

const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::MGreaterAlpha: return "MGreaterAlpha";
    case CaseTag::MZero: return "MZero";
    case CaseTag::MNegative: return "MNegative";
    case CaseTag::MBetweenZeroAlpha: return "MBetweenZeroAlpha";
    case CaseTag::MEqualsAlphaInteger: return "MEqualsAlphaInteger";
    case CaseTag::ABPlus: return "ABPlus";
    case CaseTag::ABMinus: return "ABMinus";
  }
  return "?";
}

CaseTag classify_regular(int m, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorKind::CaseMismatch, "regular-field cases need alpha > 0");
  if (m == 0) return CaseTag::MZero;
  if (m < 0) return CaseTag::MNegative;
  if (is_integer_flux(alpha) && m == static_cast<int>(std::lround(alpha))) return CaseTag::MEqualsAlphaInteger;
  if (m > alpha) return CaseTag::MGreaterAlpha;
  return CaseTag::MBetweenZeroAlpha;
}

namespace {

// g_+^2 t^{1-2m} and the W of each case; tails are exact for T on the
// side of rho where they are used
WeightPair regular_pair(int m, double a, double rho, CaseTag tag) {
  const double mm = m;
  auto g2 = [a, rho](double t) { return t <= rho ? 1.0 : std::pow(t / rho, 2.0 * a); };
  WeightPair p;
  p.V = [g2, mm](double t) { return g2(t) * std::pow(t, 1.0 - 2.0 * mm); };
  p.scale = rho;
  p.breakpoints = {rho};
  const double r2a = std::pow(rho, 2.0 * a);
  switch (tag) {
    case CaseTag::MZero:
      p.W = [g2, rho](double t) { return g2(t) * t / (rho * rho + t * t); };
      break;
    case CaseTag::MEqualsAlphaInteger:
      p.W = [g2, rho, mm](double t) {
        double l = std::log(t / rho);
        return g2(t) * std::pow(t, 1.0 - 2.0 * mm) / (rho * rho + t * t * (1.0 + l * l));
      };
      break;
    default:
      p.W = [g2, mm](double t) { return g2(t) * std::pow(t, -1.0 - 2.0 * mm); };
  }
  switch (tag) {
    case CaseTag::MGreaterAlpha:
      p.side = Side::VanishAtZero;
      p.inv_v_tail = [mm](double T) { return std::pow(T, 2 * mm) / (2 * mm); };
      p.w_tail = [mm, a, r2a](double T) { return std::pow(T, 2 * a - 2 * mm) / (r2a * 2 * (mm - a)); };
      break;
    case CaseTag::MEqualsAlphaInteger:
      p.side = Side::VanishAtZero;
      p.inv_v_tail = [mm](double T) { return std::pow(T, 2 * mm) / (2 * mm); };
      // t^{1-2a} g^2 = rho^{-2a} t: int_T^inf ~ rho^{-2a} (pi/2 - atan log(T/rho))
      p.w_tail = [r2a, rho](double T) { return (M_PI / 2 - std::atan(std::log(T / rho))) / r2a; };
      break;
    case CaseTag::MZero:
      p.side = Side::VanishAtInfinity;
      p.inv_v_tail = [a, r2a](double T) { return r2a * std::pow(T, -2 * a) / (2 * a); };
      p.w_tail = [rho](double T) { return 0.5 * std::log1p(T * T / (rho * rho)); };
      break;
    case CaseTag::MNegative:
      p.side = Side::VanishAtInfinity;
      p.inv_v_tail = [a, mm, r2a](double T) { return r2a * std::pow(T, 2 * mm - 2 * a) / (2 * (a - mm)); };
      p.w_tail = [mm](double T) { return std::pow(T, -2 * mm) / (-2 * mm); };
      break;
    default:
      break;
  }
  return p;
}

}  // namespace

ModeProblem make_mode(int m, double alpha, double rho, CaseTag tag) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorKind::InvalidArgument, "rho must be positive");
  if (tag == CaseTag::ABPlus || tag == CaseTag::ABMinus)
    return make_ab_mode(m, alpha, tag == CaseTag::ABPlus ? Spin::Plus : Spin::Minus, rho);
  CaseTag actual = classify_regular(m, alpha);
  if (actual != tag)
    fail(ErrorKind::CaseMismatch, std::string("m = ") + std::to_string(m) + ", alpha = " + std::to_string(alpha) +
                                      " is " + to_string(actual) + ", not " + to_string(tag));
  ModeProblem p{m, alpha, rho, tag, {}};
  if (tag != CaseTag::MBetweenZeroAlpha) {
    p.pairs.push_back(regular_pair(m, alpha, rho, tag));
    return p;
  }
  // split at rho: vanishing at 0 on (0, rho), at infinity on (rho, inf)
  const double mm = m, a = alpha;
  const double r2a = std::pow(rho, 2 * a);
  WeightPair inner = regular_pair(m, alpha, rho, CaseTag::MGreaterAlpha);
  inner.b = rho;
  inner.breakpoints.clear();
  inner.side = Side::VanishAtZero;
  inner.w_tail = nullptr;
  WeightPair outer = regular_pair(m, alpha, rho, CaseTag::MGreaterAlpha);
  outer.a = rho;
  outer.breakpoints.clear();
  outer.side = Side::VanishAtInfinity;
  outer.inv_v_tail = [a, mm, r2a](double T) { return r2a * std::pow(T, 2 * mm - 2 * a) / (2 * (a - mm)); };
  outer.w_tail = nullptr;
  p.pairs = {inner, outer};
  return p;
}

ModeProblem make_regular_mode(int m, double alpha, double rho) {
  return make_mode(m, alpha, rho, classify_regular(m, alpha));
}

ModeProblem make_ab_mode(int m, double alpha, Spin spin, double rho) {
  if (!(alpha > -1.0 && alpha < 1.0)) fail(ErrorKind::CaseMismatch, "Aharonov-Bohm modes need alpha in (-1, 1)");
  if (spin == Spin::Both) fail(ErrorKind::InvalidArgument, "pick spin Plus or Minus");
  const double g = spin == Spin::Plus ? alpha - m : m - alpha;
  if (g == 0.0) fail(ErrorKind::CaseMismatch, "critical mode m = alpha has no Hardy bound");
  ModeProblem p{m, alpha, rho, spin == Spin::Plus ? CaseTag::ABPlus : CaseTag::ABMinus, {}};
  WeightPair w;
  w.V = [g](double t) { return std::pow(t, 1.0 + 2.0 * g); };
  w.W = [g](double t) { return std::pow(t, 2.0 * g - 1.0); };
  w.scale = rho;
  if (g > 0.0) {
    w.side = Side::VanishAtInfinity;
    w.inv_v_tail = [g](double T) { return std::pow(T, -2 * g) / (2 * g); };
    w.w_tail = [g](double T) { return std::pow(T, 2 * g) / (2 * g); };
  } else {
    w.side = Side::VanishAtZero;
    w.inv_v_tail = [g](double T) { return std::pow(T, -2 * g) / (-2 * g); };
    w.w_tail = [g](double T) { return std::pow(T, 2 * g) / (-2 * g); };
  }
  p.pairs.push_back(w);
  return p;
}

double mode_constant_closed_form(const ModeProblem& p) {
  const double m = p.m, a = p.alpha;
  switch (p.tag) {
    case CaseTag::MGreaterAlpha:
    case CaseTag::MBetweenZeroAlpha: return (m - a) * (m - a);
    case CaseTag::MZero: return std::min(1.0, a * a);
    case CaseTag::MNegative: return 1.0;
    case CaseTag::MEqualsAlphaInteger: return a / (4.0 * a + M_PI);
    case CaseTag::ABPlus:
    case CaseTag::ABMinus: {
      // alpha >= 0: (m-alpha)^2 for m >= 1, alpha^2 for m <= 0; mirrored for alpha < 0
      bool far = a >= 0.0 ? p.m >= 1 : p.m <= -1;
      return far ? (m - a) * (m - a) : a * a;
    }
  }
  return 0.0;
}

CaseReport verify_case_sup(const ModeProblem& p, const SupOptions& opt) {
  CaseReport r;
  r.tag = p.tag;
  r.m = p.m;
  r.alpha = p.alpha;
  r.rho = p.rho;
  r.closed_form = mode_constant_closed_form(p);
  const double m = p.m, a = p.alpha;

  std::vector<SupResult> sups;
  for (const auto& pair : p.pairs) sups.push_back(muckenhoupt_sup_detailed(pair, opt));

  auto add = [&r](std::string label, double numeric, double printed, bool eq) {
    bool ok = eq ? std::abs(numeric - printed) <= kCaseSlack * std::abs(printed)
                 : numeric <= printed * (1.0 + kCaseSlack);
    r.branches.push_back({std::move(label), numeric, printed, eq, ok});
  };
  auto branch = [&sups](std::size_t pair, std::size_t b) { return sups.at(pair).branches.at(b).sup; };

  switch (p.tag) {
    case CaseTag::MGreaterAlpha: {
      double c = 1.0 / (4 * (m - a) * (m - a));
      add("s<=rho", branch(0, 0), c, false);
      add("s>rho", branch(0, 1), c, false);
      r.stated_bound = c;
      break;
    }
    case CaseTag::MZero: {
      double in = 0.25 * (a <= 1.0 ? 1.0 / a : std::exp(1.0 / a - 1.0));
      double out = std::max(std::pow(1.0 + a * std::log(2.0), 2) / 4.0, std::log(2.0)) / (4.0 * a * a);
      add("s<=rho", branch(0, 0), in, false);
      add("s>rho", branch(0, 1), out, false);
      add("s>rho final", branch(0, 1), 0.25 * std::max(1.0, 1.0 / (a * a)), false);
      r.stated_bound = 0.25 * std::max(1.0, 1.0 / (a * a));
      break;
    }
    case CaseTag::MNegative:
      add("s<=rho", branch(0, 0), 1.0 / (4 * m * m), true);
      add("s>rho", branch(0, 1), -1.0 / (4 * m * (a - m)), true);
      r.stated_bound = 0.25;
      break;
    case CaseTag::MBetweenZeroAlpha: {
      double ci = 1.0 / (4 * m * m), co = 1.0 / (4 * (m - a) * (m - a));
      add("(0,rho)", sups[0].sup, ci, false);
      add("(rho,inf)", sups[1].sup, co, false);
      r.stated_bound = sups[0].sup >= sups[1].sup ? ci : co;
      break;
    }
    case CaseTag::MEqualsAlphaInteger: {
      add("s<=rho", branch(0, 0), (M_PI + std::log(2.0)) / (4 * a), false);
      add("s>rho", branch(0, 1), M_PI / (4 * a) + 1.0, false);
      r.stated_bound = M_PI / (4 * a) + 1.0;
      break;
    }
    case CaseTag::ABPlus:
    case CaseTag::ABMinus: {
      double c = 1.0 / (4 * (m - a) * (m - a));
      add("all", branch(0, 0), c, true);
      r.stated_bound = c;
      break;
    }
  }
  r.numeric_sup = 0.0;
  for (const auto& s : sups) r.numeric_sup = std::max(r.numeric_sup, s.sup);
  r.derived_constant = 1.0 / (4.0 * r.numeric_sup);
  r.pass = r.numeric_sup <= r.stated_bound * (1.0 + kCaseSlack) &&
           r.derived_constant >= r.closed_form * (1.0 - kCaseSlack);
  for (const auto& b : r.branches) r.pass = r.pass && b.pass;
  return r;
}

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string case_csv_header() { return "case_tag,m,alpha,rho,numeric_sup,stated_bound,derived_constant,pass"; }

std::string to_csv_row(const CaseReport& r) {
  return std::string(to_string(r.tag)) + "," + std::to_string(r.m) + "," + num(r.alpha) + "," + num(r.rho) + "," +
         num(r.numeric_sup) + "," + num(r.stated_bound) + "," + num(r.derived_constant) + "," +
         (r.pass ? "true" : "false");
}

}  // namespace hardy
