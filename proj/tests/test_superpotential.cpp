#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hardy/error.hpp"
#include "hardy/superpotential.hpp"

using namespace hardy;

namespace {

// h for B_n inside the unit disk: alpha (1 - r^{n+2}) / (n+2)
double h_bn(double alpha, int n, double r) {
  return r <= 1.0 ? alpha * (1.0 - std::pow(r, n + 2)) / (n + 2) : -alpha * std::log(r);
}

FieldSpec disk(double height) {
  return make_radial(RadialProfile::from_function([height](double r) { return r < 1.0 ? height : 0.0; },
                                                  RadialGrid::default_grid(), {1.0}));
}

// b = 2 alpha / (1 + r^2)^2 has h = -(alpha/2) log(1 + r^2)
FieldSpec lorentz(double alpha) {
  return make_radial(RadialProfile::from_function(
                         [alpha](double r) { return 2.0 * alpha / ((1 + r * r) * (1 + r * r)); },
                         // ends while b is still above 1e-14: support stays infinite
                         RadialGrid::log_spaced(1e-6, 1e3, 2048)),
                     4.0);
}

FieldSpec annulus() {
  return make_radial(RadialProfile::from_function(
      [](double r) {
        if (r <= 1.5 || r >= 3.0) return 0.0;
        double s = std::sin(M_PI * (r - 1.5) / 1.5);
        return 0.7 * s * s;
      },
      RadialGrid::default_grid(), {1.5, 3.0}));
}

}  // namespace

TEST_SUITE("superpotential") {

TEST_CASE("compute_h_radial oracles") {
  auto t = compute_h_radial(make_bn(0.4, 2));
  CHECK(t.eval(2.0) == doctest::Approx(-0.4 * std::log(2.0)).epsilon(1e-13));
  CHECK(t.tail_start == 1.0);
  CHECK(t.tail_exponent == -0.4);

  auto z = compute_h_radial(make_zero_field());
  for (double v : z.h) CHECK(v == 0.0);
  CHECK(z.h_origin == 0.0);

  auto d = compute_h_radial(disk(1.0));
  CHECK(d.h_origin == doctest::Approx(0.25).epsilon(1e-12));
  for (double r : {1e-3, 0.2, 0.5, 0.9}) CHECK(d.eval(r) == doctest::Approx((1 - r * r) / 4).epsilon(1e-10));
}

TEST_CASE("B_n closed form on nodes and between nodes") {
  for (int n : {0, 1, 8, 32}) {
    auto t = compute_h_radial(make_bn(0.5, n));
    CHECK(t.h_origin == doctest::Approx(0.5 / (n + 2)).epsilon(1e-12));
    for (std::size_t i = 0; i < t.r.size(); i += 37)
      CHECK(std::abs(t.h[i] - h_bn(0.5, n, t.r[i])) <= 1e-11 * (1 + std::abs(h_bn(0.5, n, t.r[i]))));
    for (double r : {0.013, 0.31, 0.77, 0.999, 1.7, 123.4, 5e7})
      CHECK(std::abs(t.eval(r) - h_bn(0.5, n, r)) <= 1e-8 * (1 + std::abs(h_bn(0.5, n, r))));
  }
}

TEST_CASE("monotone h and the tail normalisation") {
  auto t = compute_h_radial(make_bn(0.75, 3));
  for (std::size_t i = 1; i < t.h.size(); ++i) {
    // strict only once the step -Phi dlog r is above rounding
    if (t.flux[i] > 1e-8) CHECK(t.h[i] < t.h[i - 1]);
    else CHECK(t.h[i] <= t.h[i - 1]);
  }
  for (double r : {1e2, 1e4, 1e6}) CHECK(std::exp(t.eval(r)) * std::pow(r, 0.75) == doctest::Approx(1.0));
  auto l = compute_h_radial(lorentz(0.6));
  CHECK_FALSE(l.compact);
  CHECK(std::exp(l.eval(1e6)) * std::pow(1e6, 0.6) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("decaying field matches -(alpha/2) log(1+r^2)") {
  auto l = compute_h_radial(lorentz(0.6));
  CHECK(l.alpha == doctest::Approx(0.6).epsilon(1e-10));
  for (double r : {0.0, 1e-3, 0.5, 2.0, 40.0, 1e4}) {
    double expect = -0.3 * std::log1p(r * r);
    double got = r == 0.0 ? l.h_origin : l.eval(r);
    CHECK(std::abs(got - expect) <= 1e-9 * (1 + std::abs(expect)));
  }
}

TEST_CASE("g_plus and g_minus") {
  CHECK(g_plus(1, 0.4, 0.5) == 1.0);
  CHECK(g_plus(1, 0.4, 1) == 1.0);
  CHECK(g_plus(2, 0.5, 8) == doctest::Approx(2.0).epsilon(1e-15));
  for (double r : {0.0, 0.3, 1.0, 7.0, 1e5}) CHECK(g_plus(1.3, 0.7, r) * g_minus(1.3, 0.7, r) == 1.0);
}

TEST_CASE("gauge comparison oracles") {
  auto t = compute_h_radial(make_bn(0.4, 8));
  auto g = gauge_comparison(t, 1.0);
  CHECK(g.k_plus == doctest::Approx(std::exp(-0.04)).epsilon(1e-12));
  CHECK(g.K_plus == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.beta_plus == doctest::Approx(std::exp(-0.08)).epsilon(1e-12));
  CHECK(g.beta_minus == doctest::Approx(g.beta_plus).epsilon(1e-14));
  CHECK(g.k_minus == doctest::Approx(1.0 / g.K_plus));

  auto z = gauge_comparison(compute_h_radial(make_zero_field()), 0.3);
  CHECK(z.k_plus == 1.0);
  CHECK(z.K_plus == 1.0);
  CHECK(z.beta_minus == 1.0);

  // rho < 1: beta = rho^{2 alpha} e^{2 h(rho)}; rho > 1: e^{2 lambda} rho^{-2 alpha}
  for (double rho : {1e-3, 0.05, 0.5}) {
    auto c = gauge_comparison(t, rho);
    CHECK(c.beta_plus == doctest::Approx(std::pow(rho, 0.8) * std::exp(2 * h_bn(0.4, 8, rho))).epsilon(1e-9));
  }
  auto c = gauge_comparison(t, 3.0);
  CHECK(c.beta_plus == doctest::Approx(std::exp(-0.08) * std::pow(3.0, -0.8)).epsilon(1e-9));
}

TEST_CASE("gauge comparison on a decaying field uses the tail limit") {
  auto l = compute_h_radial(lorentz(0.6));
  for (double rho : {0.1, 1.0, 4.0}) {
    auto c = gauge_comparison(l, rho);
    double k = std::min(1.0, std::pow(rho, 0.6));
    double K = std::pow(1 + rho * rho, 0.3);
    CHECK(c.k_plus == doctest::Approx(k).epsilon(1e-8));
    CHECK(c.K_plus == doctest::Approx(K).epsilon(1e-8));
  }
}

TEST_CASE("golden refinement finds an interior extremum") {
  // negative ring: the flux changes sign at sqrt 3, so e^{-h}/g_+ peaks between nodes
  auto g = RadialGrid::log_spaced(1e-6, 1e6, 64);
  auto f = make_radial(RadialProfile::from_function(
      [](double r) { return r < 1.0 ? 1.0 : (r < 2.0 ? -0.5 : 0.0); }, g, {1.0, 2.0}));
  auto t = compute_h_radial(f, g);
  auto c = gauge_comparison(t, 10.0);
  // brute force on a dense sweep of the interpolant
  double best = 0;
  for (int i = 0; i <= 400000; ++i) {
    double r = std::exp(std::log(1e-3) + i * (std::log(1e3) - std::log(1e-3)) / 400000);
    best = std::max(best, std::exp(-t.eval(r)) / g_plus(10.0, t.alpha, r));
  }
  CHECK(c.K_plus >= best * (1 - 1e-12));
  CHECK(c.K_plus == doctest::Approx(best).epsilon(1e-8));
  CHECK(c.r_K_plus == doctest::Approx(std::sqrt(3.0)).epsilon(1e-2));  // flux vanishes at r^2 = 3
}

TEST_CASE("lambda_R and radial_beta") {
  for (int n : {1, 2, 8}) CHECK(lambda_R(make_bn(0.3, n), 1.0) == doctest::Approx(-0.3 / (n + 2)).epsilon(1e-12));
  CHECK(lambda_R(make_zero_field(), 1.0) == 0.0);
  CHECK(lambda_R(disk(1.0), 1.0) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(radial_beta(disk(1.0), 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  for (int n : {1, 4, 16}) {
    double b = radial_beta(make_bn(0.5, n), 1.0);
    CHECK(b == doctest::Approx(std::exp(-1.0 / (n + 2))).epsilon(1e-12));
    CHECK(b >= 1.0 - 1.0 / n);
  }
  // support must sit inside (0, R)
  CHECK_THROWS_AS(lambda_R(make_bn(0.3, 2), 0.5), Error);
  CHECK_THROWS_AS(lambda_R(make_ab(0.3), 1.0), Error);
  auto neg = make_radial(RadialProfile::from_function([](double r) { return r < 1 ? 1.0 - 2.0 * r : 0.0; },
                                                      RadialGrid::default_grid(), {1.0}));
  try {
    radial_beta(neg, 1.0);
    FAIL("expected NegativeFieldUnsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeFieldUnsupported);
  }
  // R past the support: lambda(R) is the full log moment, beta picks up R^{-2 alpha}
  CHECK(radial_beta(disk(1.0), 2.0) == doctest::Approx(std::exp(-0.5) / 2.0).epsilon(1e-12));
}

TEST_CASE("gauge comparison agrees with radial_beta at rho = R") {
  for (double a : {0.25, 0.5, 1.0}) {
    auto f = make_bn(a, 3);
    auto g = gauge_comparison(compute_h_radial(f), 1.0);
    CHECK(std::abs(g.beta_plus - radial_beta(f, 1.0)) / g.beta_plus <= 1e-8);
  }
  auto g = gauge_comparison(compute_h_radial(disk(1.0)), 1.0);
  CHECK(std::abs(g.beta_plus - radial_beta(disk(1.0), 1.0)) / g.beta_plus <= 1e-8);
}

TEST_CASE("small-rho slope of beta_plus") {
  auto t = compute_h_radial(make_bn(0.4, 8));
  double b1 = gauge_comparison(t, 1e-3).beta_plus, b2 = gauge_comparison(t, 1e-1).beta_plus;
  double slope = std::log(b2 / b1) / std::log(100.0);
  CHECK(slope == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("exact cell log integral") {
  // corner of the unit square: (1/2) log 2 - 3/2 + pi/4
  CHECK(cell_log_integral(0, 1, 0, 1) == doctest::Approx(0.5 * std::log(2.0) - 1.5 + M_PI / 4).epsilon(1e-14));
  // brute-force midpoint sum for an off-centre cell
  double s = 0;
  int N = 2000;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double x = -0.3 + 0.5 * (i + 0.5) / N, y = 0.1 + 0.4 * (j + 0.5) / N;
      s += std::log(std::hypot(x, y));
    }
  s *= 0.5 * 0.4 / (double(N) * N);
  CHECK(cell_log_integral(-0.3, 0.2, 0.1, 0.5) == doctest::Approx(s).epsilon(1e-6));
}

TEST_CASE("compute_h_general oracles") {
  auto z = make_sampled(sample_on_square([](double, double) { return 0.0; }, 1.0, 10));
  auto tz = compute_h_general(z, {{0.1, 0.2}, {3, 4}});
  for (double v : tz.h) CHECK(v == 0.0);

  Sampled2D one{1, 1, 0.1, -0.05, -0.05, {5.0}};
  auto f = make_sampled(one);
  double a = compute_flux(f);
  auto t = compute_h_general(f, {{10.0, 0.0}, {0.0, -10.0}});
  for (double v : t.h) CHECK(v == doctest::Approx(-a * std::log(10.0)).epsilon(1e-6));
}

TEST_CASE("compute_h_general reduces to the radial path") {
  auto rf = annulus();
  auto radial = compute_h_radial(rf);
  auto b = std::get<RadialProfile>(rf.kind).density;
  auto s = make_sampled(sample_on_square([&b](double x, double y) { return b(std::hypot(x, y)); }, 3.2, 640));
  std::vector<Point2> pts;
  std::vector<double> rs{0.1, 0.5, 1.0, 2.0, 2.5, 5.0, 10.0};
  for (double r : rs) pts.push_back({r * std::cos(0.3), r * std::sin(0.3)});
  auto gen = compute_h_general(s, pts);
  CHECK_FALSE(gen.radial);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double ref = radial.eval(rs[i]);
    CHECK(std::abs(gen.h[i] - ref) <= 1e-4 * std::abs(ref));
  }
  CHECK_THROWS_AS(compute_h_general(rf, pts), Error);
  CHECK_THROWS_AS(compute_h_radial(s), Error);
}

TEST_CASE("table export round trip") {
  auto t = compute_h_radial(make_bn(0.4, 8), RadialGrid::log_spaced(1e-3, 1e3, 301));
  std::stringstream ss;
  export_table(t, ss);
  auto u = import_table(ss);
  CHECK(u.alpha == t.alpha);
  CHECK(u.tail_start == t.tail_start);
  CHECK(u.tail_exponent == t.tail_exponent);
  CHECK(u.h_origin == t.h_origin);
  REQUIRE(u.h.size() == t.h.size());
  for (std::size_t i = 0; i < t.h.size(); ++i) CHECK(u.h[i] == t.h[i]);
  auto c1 = gauge_comparison(t, 1.0), c2 = gauge_comparison(u, 1.0);
  CHECK(c2.beta_plus == doctest::Approx(c1.beta_plus).epsilon(1e-10));
  std::stringstream bad("# alpha = x\n1 2\n");
  CHECK_THROWS_AS(import_table(bad), Error);
}

}
