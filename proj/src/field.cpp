#include "hardy/field.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/error.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

namespace {

constexpr double kSignificant = 1e-14;

[[noreturn]] void fail(ErrorKind k, const std::string& msg) { throw Error(k, "field", msg); }

double interpolate(const RadialGrid& g, const std::vector<double>& s, double r) {
  if (r <= g.front()) return s.front();
  if (r > g.back()) return 0.0;
  std::size_t i = g.locate(r);
  double t = (r - g[i]) / (g[i + 1] - g[i]);
  return (1.0 - t) * s[i] + t * s[i + 1];
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

RadialProfile RadialProfile::from_samples(RadialGrid grid, std::vector<double> samples) {
  if (samples.size() != grid.size()) fail(ErrorKind::InvalidArgument, "sample count differs from grid size");
  for (double v : samples)
    if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "radial samples must be finite");
  RadialProfile p;
  p.grid = std::move(grid);
  p.samples = std::move(samples);
  auto g = p.grid;
  auto s = p.samples;
  p.density = [g, s](double r) { return interpolate(g, s, r); };
  p.breakpoints = p.grid.nodes();
  p.interpolated = true;
  return p;
}

RadialProfile RadialProfile::from_function(std::function<double(double)> b, RadialGrid grid,
                                           std::vector<double> breakpoints) {
  RadialProfile p;
  p.samples.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p.samples[i] = b(grid[i]);
    if (!std::isfinite(p.samples[i])) fail(ErrorKind::InvalidArgument, "radial samples must be finite");
  }
  p.grid = std::move(grid);
  p.density = std::move(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  p.breakpoints = std::move(breakpoints);
  return p;
}

double RadialProfile::support_radius() const {
  std::size_t last = samples.size();
  for (std::size_t i = samples.size(); i-- > 0;) {
    if (std::abs(samples[i]) >= kSignificant) {
      last = i;
      break;
    }
  }
  if (last == samples.size()) return grid.front();  // nothing significant: vanishing field
  if (last + 1 == samples.size()) {
    // samples-only profiles vanish past the last node
    return interpolated ? grid.back() : kInf;
  }
  for (double bp : breakpoints)
    if (bp > grid[last] && bp < grid[last + 1]) return bp;
  return grid[last + 1];
}

bool FieldSpec::is_radial() const {
  return std::holds_alternative<RadialProfile>(kind) || std::holds_alternative<PolynomialCutoff>(kind);
}

std::string FieldSpec::kind_name() const {
  return std::visit(overloaded{[](const RadialProfile&) { return std::string("radial_profile"); },
                               [](const PolynomialCutoff&) { return std::string("polynomial_cutoff"); },
                               [](const Sampled2D&) { return std::string("sampled_2d"); },
                               [](const AharonovBohm&) { return std::string("aharonov_bohm"); }},
                    kind);
}

void validate(const FieldSpec& f) {
  if (!(f.decay_exponent > 2.0)) fail(ErrorKind::InvalidArgument, "decay exponent tau must exceed 2");
  if (!(f.local_integrability > 2.0)) fail(ErrorKind::InvalidArgument, "local integrability p must exceed 2");
  if (auto* ab = std::get_if<AharonovBohm>(&f.kind)) {
    if (!(ab->alpha > -1.0 && ab->alpha < 1.0)) fail(ErrorKind::InvalidArgument, "Aharonov-Bohm flux must lie in (-1, 1)");
  }
  if (auto* pc = std::get_if<PolynomialCutoff>(&f.kind)) {
    if (pc->n < 0) fail(ErrorKind::InvalidArgument, "B_n exponent must be nonnegative");
    if (!std::isfinite(pc->alpha)) fail(ErrorKind::InvalidArgument, "B_n flux must be finite");
  }
  if (auto* s = std::get_if<Sampled2D>(&f.kind)) {
    if (s->nx == 0 || s->ny == 0 || s->values.size() != s->nx * s->ny || !(s->cell > 0.0))
      fail(ErrorKind::InvalidArgument, "sampled field dimensions are inconsistent");
    for (double v : s->values)
      if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "sampled field values must be finite");
  }
}

FieldSpec make_bn(double alpha, int n) {
  FieldSpec f{PolynomialCutoff{alpha, n}};
  validate(f);
  return f;
}

FieldSpec make_zero_field() { return make_bn(0.0, 0); }

FieldSpec make_radial(RadialProfile profile, double tau, double p) {
  FieldSpec f{std::move(profile), tau, p};
  validate(f);
  return f;
}

FieldSpec make_sampled(Sampled2D grid, double tau, double p) {
  FieldSpec f{std::move(grid), tau, p};
  validate(f);
  return f;
}

FieldSpec make_ab(double alpha) {
  FieldSpec f{AharonovBohm{alpha}};
  validate(f);
  return f;
}

Sampled2D sample_on_square(const std::function<double(double, double)>& B, double half_width,
                           std::size_t cells) {
  Sampled2D s;
  s.nx = s.ny = cells;
  s.cell = 2.0 * half_width / static_cast<double>(cells);
  s.x0 = s.y0 = -half_width;
  s.values.resize(cells * cells);
  for (std::size_t j = 0; j < cells; ++j)
    for (std::size_t i = 0; i < cells; ++i) s.values[j * cells + i] = B(s.center_x(i), s.center_y(j));
  return s;
}

RadialDensity radial_density(const FieldSpec& f) {
  RadialDensity d;
  if (auto* pc = std::get_if<PolynomialCutoff>(&f.kind)) {
    double a = pc->alpha;
    int n = pc->n;
    d.b = [a, n](double r) { return r < 1.0 ? a * (n + 2) * std::pow(r, n) : 0.0; };
    d.support = 1.0;
    d.breakpoints = {1.0};
    return d;
  }
  if (auto* rp = std::get_if<RadialProfile>(&f.kind)) {
    d.b = rp->density;
    d.support = rp->support_radius();
    for (double bp : rp->breakpoints)
      if (bp < d.support) d.breakpoints.push_back(bp);
    if (d.compact()) d.breakpoints.push_back(d.support);
    std::sort(d.breakpoints.begin(), d.breakpoints.end());
    return d;
  }
  fail(ErrorKind::NonRadialField, f.kind_name() + " field has no radial density");
}

double compute_flux(const FieldSpec& f) {
  return std::visit(
      overloaded{[](const PolynomialCutoff& pc) { return pc.alpha; },
                 [](const AharonovBohm& ab) { return ab.alpha; },
                 [](const Sampled2D& s) {
                   double total = 0.0;
                   for (double v : s.values) total += v;
                   return total * s.cell * s.cell / (2.0 * M_PI);
                 },
                 [&f](const RadialProfile&) {
                   auto d = radial_density(f);
                   auto integrand = [&d](double t) { return d.b(t) * t; };
                   return quad::integrate_piecewise(integrand, 0.0, d.support, d.breakpoints);
                 }},
      f.kind);
}

FluxFunction flux_function(const FieldSpec& f, const RadialGrid& grid) {
  auto d = radial_density(f);
  FluxFunction out;
  out.grid = grid;
  out.total_flux = compute_flux(f);
  out.values.resize(grid.size());
  auto integrand = [&d](double t) { return d.b(t) * t; };
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r = grid[i];
    if (r >= d.support) {
      out.values[i] = out.total_flux;
      continue;
    }
    acc += quad::integrate_piecewise(integrand, prev, r, d.breakpoints);
    prev = r;
    out.values[i] = acc;
  }
  return out;
}

namespace {

// least-squares slope of log|B| against log r
double fit_slope(const std::vector<double>& lr, const std::vector<double>& lb) {
  double n = static_cast<double>(lr.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    sx += lr[i];
    sy += lb[i];
    sxx += lr[i] * lr[i];
    sxy += lr[i] * lb[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DecayReport judge(DecayReport rep, const std::vector<double>& lr, const std::vector<double>& lb) {
  if (lr.size() < 3) {
    rep.compact = true;
    rep.pass = true;
    rep.fitted_tau = NAN;
    rep.note = "no significant tail samples: treated as compactly supported";
    return rep;
  }
  rep.fitted_tau = -fit_slope(lr, lb);
  rep.pass = rep.fitted_tau >= rep.claimed_tau * (1.0 - 0.05);
  rep.note = rep.pass ? "tail consistent with claimed decay" : "tail decays slower than claimed";
  return rep;
}

}  // namespace

DecayReport validate_decay(const FieldSpec& f) {
  DecayReport rep;
  rep.kind = f.kind_name();
  rep.claimed_tau = f.decay_exponent;
  rep.fitted_tau = NAN;
  if (std::holds_alternative<AharonovBohm>(f.kind)) {
    rep.compact = true;
    rep.pass = true;
    rep.note = "Aharonov-Bohm flux has no field away from the origin";
    return rep;
  }
  if (std::holds_alternative<PolynomialCutoff>(f.kind)) {
    rep.compact = true;
    rep.pass = true;
    rep.note = "compact support";
    return rep;
  }
  std::vector<double> lr, lb;
  if (auto* s = std::get_if<Sampled2D>(&f.kind)) {
    double R = std::min({-s->x0, -s->y0, s->x0 + s->cell * static_cast<double>(s->nx),
                         s->y0 + s->cell * static_cast<double>(s->ny)});
    if (!(R > 0.0)) {
      rep.note = "origin is not inside the sampled window";
      return rep;
    }
    for (std::size_t j = 0; j < s->ny; ++j)
      for (std::size_t i = 0; i < s->nx; ++i) {
        double r = std::hypot(s->center_x(i), s->center_y(j));
        double v = std::abs(s->at(i, j));
        if (r >= R / 3.0 && r <= 0.95 * R && v >= kSignificant) {
          lr.push_back(std::log(r));
          lb.push_back(std::log(v));
        }
      }
    return judge(rep, lr, lb);
  }
  const auto& p = std::get<RadialProfile>(f.kind);
  if (p.support_radius() < kInf) {
    rep.compact = true;
    rep.pass = true;
    rep.note = "compact support";
    return rep;
  }
  // last two decades of the sample grid
  double lo = p.grid.back() / 100.0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    double v = std::abs(p.samples[i]);
    if (p.grid[i] >= lo && v >= kSignificant) {
      lr.push_back(std::log(p.grid[i]));
      lb.push_back(std::log(v));
    }
  }
  return judge(rep, lr, lb);
}

FieldSpec scaled(const FieldSpec& f, double c) {
  FieldSpec out = f;
  std::visit(overloaded{[c](PolynomialCutoff& pc) { pc.alpha *= c; },
                        [c](AharonovBohm& ab) { ab.alpha *= c; },
                        [c](Sampled2D& s) {
                          for (double& v : s.values) v *= c;
                        },
                        [c](RadialProfile& rp) {
                          for (double& v : rp.samples) v *= c;
                          auto b = rp.density;
                          rp.density = [b, c](double r) { return c * b(r); };
                        }},
             out.kind);
  validate(out);
  return out;
}

FieldSpec sum(const FieldSpec& a, const FieldSpec& b) {
  if (a.is_radial() && b.is_radial()) {
    auto da = radial_density(a);
    auto db = radial_density(b);
    RadialGrid g = std::holds_alternative<RadialProfile>(a.kind) ? std::get<RadialProfile>(a.kind).grid
                   : std::holds_alternative<RadialProfile>(b.kind) ? std::get<RadialProfile>(b.kind).grid
                                                                     : RadialGrid::default_grid();
    auto bp = da.breakpoints;
    bp.insert(bp.end(), db.breakpoints.begin(), db.breakpoints.end());
    auto fa = da.b, fb = db.b;
    auto p = RadialProfile::from_function([fa, fb](double r) { return fa(r) + fb(r); }, g, bp);
    return make_radial(std::move(p), std::min(a.decay_exponent, b.decay_exponent),
                       std::min(a.local_integrability, b.local_integrability));
  }
  auto* sa = std::get_if<Sampled2D>(&a.kind);
  auto* sb = std::get_if<Sampled2D>(&b.kind);
  if (sa && sb && sa->nx == sb->nx && sa->ny == sb->ny && sa->cell == sb->cell && sa->x0 == sb->x0 &&
      sa->y0 == sb->y0) {
    Sampled2D s = *sa;
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] += sb->values[i];
    return make_sampled(std::move(s), std::min(a.decay_exponent, b.decay_exponent),
                        std::min(a.local_integrability, b.local_integrability));
  }
  fail(ErrorKind::InvalidArgument, "fields of kinds " + a.kind_name() + " and " + b.kind_name() +
                                       " cannot be added");
}

}  // namespace hardy
