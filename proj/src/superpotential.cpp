#include "hardy/superpotential.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "hardy/error.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

namespace {

[[noreturn]] void fail(ErrorKind k, const std::string& msg) { throw Error(k, "superpotential", msg); }

// node set = grid nodes plus the density breakpoints that fall inside it
std::vector<double> table_nodes(const RadialGrid& grid, const RadialDensity& d) {
  std::vector<double> v = grid.nodes();
  for (double bp : d.breakpoints)
    if (bp > grid.front() && bp < grid.back()) v.push_back(bp);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

SuperpotentialTable compute_h_radial(const FieldSpec& field, const RadialGrid& grid) {
  const RadialDensity d = radial_density(field);
  SuperpotentialTable t;
  t.radial = true;
  t.r = table_nodes(grid, d);
  const std::size_t n = t.r.size();
  t.alpha = compute_flux(field);
  t.tail_exponent = -t.alpha;
  t.compact = d.compact();
  t.tail_start = d.compact() ? d.support : t.r.back();

  auto mass = [&d](double s) { return d.b(s) * s; };
  auto logm = [&d](double s) { return s > 0.0 ? d.b(s) * s * std::log(s) : 0.0; };
  const double end = d.compact() ? d.support : kInf;
  auto seg = [&](const quad::Fn& f, double a, double b) {
    return quad::integrate_piecewise(f, a, std::min(b, end), d.breakpoints);
  };

  // forward flux, reverse remainders psi = int_r^inf b t, T = int_r^inf b t log t
  std::vector<double> phi(n), psi(n), T(n);
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.r[i] >= end) {
      phi[i] = t.alpha;
      continue;
    }
    acc += seg(mass, prev, t.r[i]);
    prev = t.r[i];
    phi[i] = acc;
  }
  double psi_acc = t.r.back() < end ? seg(mass, t.r.back(), kInf) : 0.0;
  double T_acc = t.r.back() < end ? seg(logm, t.r.back(), kInf) : 0.0;
  psi[n - 1] = psi_acc;
  T[n - 1] = T_acc;
  std::vector<double> dT(n, 0.0);  // int_{r_i}^{r_{i+1}} b t log t
  for (std::size_t i = n - 1; i-- > 0;) {
    if (t.r[i] < end) {
      psi_acc += seg(mass, t.r[i], t.r[i + 1]);
      dT[i] = seg(logm, t.r[i], t.r[i + 1]);
      T_acc += dT[i];
    }
    psi[i] = psi_acc;
    T[i] = T_acc;
  }
  const double T0 = seg(logm, 0.0, t.r[0]);
  t.h_origin = -(T[0] + T0);

  t.h.resize(n);
  t.flux.resize(n);
  t.curv_left.resize(n);
  t.curv_right.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = t.r[i];
    const double lr = std::log(r);
    if (t.compact && r >= t.tail_start) {
      t.h[i] = -t.alpha * lr;
      t.flux[i] = t.alpha;
    } else if (r <= 1.0) {
      // forward from the origin in increments -int Phi/t, so tiny fluxes
      // near 0 do not drown in the rounding of T
      const double prev_lphi = i == 0 ? 0.0 : std::log(t.r[i - 1]) * phi[i - 1];
      const double step = -(lr * phi[i] - prev_lphi) + (i == 0 ? T0 : dT[i - 1]);
      t.h[i] = (i == 0 ? t.h_origin : t.h[i - 1]) + step;
      t.flux[i] = phi[i];
    } else {
      t.h[i] = -t.alpha * lr + (psi[i] * lr - T[i]);
      t.flux[i] = t.alpha - psi[i];
    }
    t.curv_left[i] = d.b(r * (1.0 - 1e-13)) * r * r;
    t.curv_right[i] = d.b(r * (1.0 + 1e-13)) * r * r;
  }
  if (!t.compact) {
    // h + alpha log r ~ C / r; C from the end so the tail is continuous
    t.tail_constant = (t.h.back() + t.alpha * std::log(t.r.back())) * t.r.back();
  }
  return t;
}

double SuperpotentialTable::eval(double x) const {
  if (!radial) fail(ErrorKind::InvalidArgument, "eval needs a radial table");
  if (x <= 0.0) return h_origin;
  if (compact && x >= tail_start) return -alpha * std::log(x);
  if (x >= r.back()) return -alpha * std::log(x) + tail_constant / x;
  if (x < r.front()) {
    double s = x / r.front();
    return h_origin + (h.front() - h_origin) * s * s;
  }
  auto it = std::upper_bound(r.begin(), r.end(), x);
  std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
  if (i + 1 >= r.size()) return h.back();
  // Hermite in x = log r: dh/dx = -Phi, d2h/dx2 = -b r^2
  const double x0 = std::log(r[i]), x1 = std::log(r[i + 1]);
  const double D = x1 - x0;
  const double t = (std::log(x) - x0) / D;
  const double p0 = h[i], p1 = h[i + 1];
  const double d0 = -flux[i] * D, d1 = -flux[i + 1] * D;
  const double t2 = t * t, t3 = t2 * t;
  if (curv_left.empty()) {
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * d1;
  }
  const double c0 = -curv_right[i] * D * D, c1 = -curv_left[i + 1] * D * D;
  const double t4 = t3 * t, t5 = t4 * t;
  return p0 * (1 - 10 * t3 + 15 * t4 - 6 * t5) + d0 * (t - 6 * t3 + 8 * t4 - 3 * t5) +
         c0 * 0.5 * (t2 - 3 * t3 + 3 * t4 - t5) + c1 * 0.5 * (t3 - 2 * t4 + t5) +
         d1 * (-4 * t3 + 7 * t4 - 3 * t5) + p1 * (10 * t3 - 15 * t4 + 6 * t5);
}

double cell_log_integral(double x1, double x2, double y1, double y2) {
  // antiderivative of log sqrt(x^2 + y^2) in x and y
  auto F = [](double x, double y) {
    double v = 0.0;
    double q = x * x + y * y;
    if (q > 0.0) v += x * y * (0.5 * std::log(q) - 1.5);
    if (x != 0.0) v += 0.5 * x * x * std::atan(y / x);
    if (y != 0.0) v += 0.5 * y * y * std::atan(x / y);
    return v;
  };
  return F(x2, y2) - F(x1, y2) - F(x2, y1) + F(x1, y1);
}

SuperpotentialTable compute_h_general(const FieldSpec& field, const std::vector<Point2>& points) {
  const auto* s = std::get_if<Sampled2D>(&field.kind);
  if (!s) fail(ErrorKind::NonRadialField, "compute_h_general expects a sampled 2-D field, got " + field.kind_name());
  SuperpotentialTable t;
  t.radial = false;
  t.compact = false;
  t.alpha = compute_flux(field);
  if (!std::isfinite(t.alpha)) fail(ErrorKind::NonIntegrableField, "sampled field has non-finite flux");
  t.tail_exponent = -t.alpha;
  const double w = s->cell;
  const double cx[2] = {s->x0, s->x0 + w * static_cast<double>(s->nx)};
  const double cy[2] = {s->y0, s->y0 + w * static_cast<double>(s->ny)};
  t.tail_start = 0.0;
  for (double a : cx)
    for (double b : cy) t.tail_start = std::max(t.tail_start, std::hypot(a, b));
  const double near = 2.5 * w;
  for (const auto& p : points) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s->ny; ++j) {
      const double yc = s->center_y(j) - p.y;
      for (std::size_t i = 0; i < s->nx; ++i) {
        const double v = s->at(i, j);
        if (v == 0.0) continue;
        const double xc = s->center_x(i) - p.x;
        if (std::abs(xc) <= near && std::abs(yc) <= near) {
          acc += v * cell_log_integral(xc - 0.5 * w, xc + 0.5 * w, yc - 0.5 * w, yc + 0.5 * w);
        } else {
          acc += v * w * w * 0.5 * std::log(xc * xc + yc * yc);
        }
      }
    }
    t.points.push_back(p);
    t.r.push_back(std::hypot(p.x, p.y));
    t.h.push_back(-acc / (2.0 * M_PI));
  }
  return t;
}

double g_plus(double rho, double alpha, double r) {
  return r <= rho ? 1.0 : std::pow(r / rho, alpha);
}

double g_minus(double rho, double alpha, double r) { return 1.0 / g_plus(rho, alpha, r); }

GaugeComparison gauge_comparison(const SuperpotentialTable& t, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorKind::InvalidArgument, "rho must be positive");
  const double a = t.alpha;
  GaugeComparison out;
  out.rho = rho;
  out.alpha = a;
  // q(r) = log(e^{-h}/g_+); the minus ratio is exactly exp(-q)
  auto logg = [rho, a](double r) { return r > rho ? a * std::log(r / rho) : 0.0; };
  const double q_inf = a * std::log(rho);

  struct Cand {
    double r, q;
  };
  std::vector<Cand> c;
  if (t.radial) {
    c.push_back({0.0, -t.h_origin});
    for (std::size_t i = 0; i < t.r.size(); ++i) c.push_back({t.r[i], -t.h[i] - logg(t.r[i])});
    c.push_back({rho, -t.eval(rho) - logg(rho)});
    if (std::isfinite(t.tail_start)) c.push_back({t.tail_start, -t.eval(t.tail_start) - logg(t.tail_start)});
    std::sort(c.begin(), c.end(), [](const Cand& x, const Cand& y) { return x.r < y.r; });
  } else {
    for (std::size_t i = 0; i < t.r.size(); ++i) c.push_back({t.r[i], -t.h[i] - logg(t.r[i])});
  }
  if (!t.compact && t.radial) {
    // envelope of the last decade: |h + alpha log r| * r
    double C = 0.0;
    for (std::size_t i = 0; i < t.r.size(); ++i)
      if (t.r[i] >= t.r.back() / 10.0) C = std::max(C, std::abs(t.h[i] + a * std::log(t.r[i])) * t.r[i]);
    double env = C / t.r.back();
    if (env > 1e-6) fail(ErrorKind::TailUnresolved, "tail envelope C/r = " + std::to_string(env) + " at the last node");
  }

  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].q < c[imin].q) imin = i;
    if (c[i].q > c[imax].q) imax = i;
  }
  double qmin = c[imin].q, qmax = c[imax].q;
  double rmin = c[imin].r, rmax = c[imax].r;

  if (t.radial) {
    auto q = [&](double r) { return -t.eval(r) - logg(r); };
    // refine around the three best candidates of each kind
    auto refine = [&](bool maximize) {
      std::vector<std::size_t> idx(c.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::partial_sort(idx.begin(), idx.begin() + std::min<std::size_t>(3, idx.size()), idx.end(),
                        [&](std::size_t x, std::size_t y) { return maximize ? c[x].q > c[y].q : c[x].q < c[y].q; });
      for (std::size_t k = 0; k < std::min<std::size_t>(3, idx.size()); ++k) {
        std::size_t j = idx[k];
        if (j == 0 || j + 1 >= c.size() || c[j - 1].r <= 0.0) continue;
        double lo = std::log(c[j - 1].r), hi = std::log(c[j + 1].r);
        auto f = [&](double x) { return maximize ? -q(std::exp(x)) : q(std::exp(x)); };
        auto res = boost::math::tools::brent_find_minima(f, lo, hi, 40);
        double val = maximize ? -res.second : res.second;
        if (maximize && val > qmax) {
          qmax = val;
          rmax = std::exp(res.first);
        }
        if (!maximize && val < qmin) {
          qmin = val;
          rmin = std::exp(res.first);
        }
      }
    };
    refine(true);
    refine(false);
  }
  // limit r -> infinity
  if (q_inf < qmin) {
    qmin = q_inf;
    rmin = kInf;
  }
  if (q_inf > qmax) {
    qmax = q_inf;
    rmax = kInf;
  }
  out.k_plus = std::exp(qmin);
  out.K_plus = std::exp(qmax);
  out.k_minus = std::exp(-qmax);
  out.K_minus = std::exp(-qmin);
  out.beta_plus = std::exp(2.0 * (qmin - qmax));
  out.beta_minus = out.beta_plus;
  out.r_k_plus = rmin;
  out.r_K_plus = rmax;
  return out;
}

double lambda_R(const FieldSpec& field, double R) {
  if (!(R > 0.0)) fail(ErrorKind::InvalidArgument, "R must be positive");
  const RadialDensity d = radial_density(field);
  if (d.support > R * (1.0 + 1e-12))
    fail(ErrorKind::InvalidArgument, "field support " + std::to_string(d.support) + " exceeds R = " + std::to_string(R));
  auto logm = [&d](double s) { return s > 0.0 ? d.b(s) * s * std::log(s) : 0.0; };
  return quad::integrate_piecewise(logm, 0.0, std::min(R, d.support), d.breakpoints);
}

double radial_beta(const FieldSpec& field, double R) {
  const RadialDensity d = radial_density(field);
  const double top = std::isfinite(d.support) ? d.support : R;
  auto probe = RadialGrid::log_spaced(top * 1e-8, top, 4096);
  for (double r : probe.nodes())
    if (d.b(r * (1.0 - 1e-12)) < 0.0)
      fail(ErrorKind::NegativeFieldUnsupported, "b takes negative values near r = " + std::to_string(r));
  if (auto* rp = std::get_if<RadialProfile>(&field.kind))
    for (double v : rp->samples)
      if (v < 0.0) fail(ErrorKind::NegativeFieldUnsupported, "b has negative samples");
  const double a = compute_flux(field);
  if (!(a > 0.0)) fail(ErrorKind::InvalidArgument, "radial_beta needs positive flux");
  return std::exp(2.0 * lambda_R(field, R) - 2.0 * a * std::log(R));
}

void export_table(const SuperpotentialTable& t, std::ostream& os) {
  if (!t.radial) fail(ErrorKind::InvalidArgument, "only radial tables are exported");
  os << std::setprecision(17);
  os << "# superpotential table\n";
  os << "# alpha = " << t.alpha << "\n";
  os << "# tail_start = " << t.tail_start << "\n";
  os << "# tail_exponent = " << t.tail_exponent << "\n";
  os << "# h_origin = " << t.h_origin << "\n";
  os << "# compact = " << (t.compact ? 1 : 0) << "\n";
  os << "# tail_constant = " << t.tail_constant << "\n";
  os << "# columns: r h\n";
  for (std::size_t i = 0; i < t.r.size(); ++i) os << t.r[i] << ' ' << t.h[i] << '\n';
}

SuperpotentialTable import_table(std::istream& is) {
  SuperpotentialTable t;
  t.radial = true;
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::ConfigError, "table line " + std::to_string(lineno) + ": " + what);
  };
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      bad("not a number: '" + s + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) bad("trailing text after number: '" + s + "'");
    return v;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      std::string val = line.substr(eq + 1);
      val.erase(0, val.find_first_not_of(' '));
      double v = number(val);
      if (key == "alpha") t.alpha = v;
      else if (key == "tail_start") t.tail_start = v;
      else if (key == "tail_exponent") t.tail_exponent = v;
      else if (key == "h_origin") t.h_origin = v;
      else if (key == "compact") t.compact = v != 0.0;
      else if (key == "tail_constant") t.tail_constant = v;
      continue;
    }
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) bad("expected two columns");
    t.r.push_back(number(a));
    t.h.push_back(number(b));
  }
  if (t.r.size() < 3) fail(ErrorKind::ConfigError, "table needs at least 3 rows");
  for (std::size_t i = 1; i < t.r.size(); ++i)
    if (!(t.r[i] > t.r[i - 1]) || !(t.r[0] > 0.0)) fail(ErrorKind::ConfigError, "table radii must increase");
  // Phi = -dh/dlog r by three-point differences
  const std::size_t n = t.r.size();
  t.flux.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.compact && t.r[i] >= t.tail_start) {
      t.flux[i] = t.alpha;
      continue;
    }
    std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == n ? n - 1 : i + 1;
    if (i == 0 || i + 1 == n) {
      t.flux[i] = -(t.h[b] - t.h[a]) / (std::log(t.r[b]) - std::log(t.r[a]));
      continue;
    }
    double x0 = std::log(t.r[a]), x1 = std::log(t.r[i]), x2 = std::log(t.r[b]);
    double h0 = x1 - x0, h1 = x2 - x1;
    double d = (-h1 / (h0 * (h0 + h1))) * t.h[a] + ((h1 - h0) / (h0 * h1)) * t.h[i] + (h0 / (h1 * (h0 + h1))) * t.h[b];
    t.flux[i] = -d;
  }
  return t;
}

}  // namespace hardy
