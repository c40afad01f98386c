#include <cmath>
#include <limits>

#include "doctest.h"
#include "hardy/error.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/radial_grid.hpp"

using namespace hardy;

TEST_SUITE("quadrature") {

TEST_CASE("log singularity at zero") {
  // int_0^1 t log t dt = -1/4
  double v = quad::integrate_dyadic([](double t) { return t * std::log(t); }, 0.0, 1.0);
  CHECK(v == doctest::Approx(-0.25).epsilon(1e-13));
}

TEST_CASE("power tail to infinity") {
  // int_1^inf t^-3 dt = 1/2
  double v = quad::integrate_dyadic([](double t) { return std::pow(t, -3.0); }, 1.0, std::numeric_limits<double>::infinity());
  CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("divergent tail throws") {
  CHECK_THROWS_AS(quad::integrate_dyadic([](double t) { return 1.0 / t; }, 1.0,
                                         std::numeric_limits<double>::infinity()),
                  Error);
}

TEST_CASE("piecewise split at a jump") {
  auto step = [](double t) { return t < 0.3 ? 1.0 : 2.0; };
  double v = quad::integrate_piecewise(step, 0.0, 1.0, {0.3});
  CHECK(v == doctest::Approx(0.3 + 1.4).epsilon(1e-14));
}

TEST_CASE("gauss4 integrates degree 7 exactly") {
  const auto& g = quad::gauss4();
  double s = 0;
  for (int q = 0; q < 4; ++q) s += g.w[q] * std::pow(g.x[q], 6);
  CHECK(s == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("grid construction and refinement") {
  auto g = RadialGrid::log_spaced(1e-2, 1e2, 5);
  CHECK(g[2] == doctest::Approx(1.0));
  auto c = RadialGrid::centered(2.0, 3.0, 4);
  CHECK(c.size() == 9);
  CHECK(c[4] == 2.0);
  CHECK(c.front() == doctest::Approx(2e-3));
  auto r = c.refined();
  CHECK(r.size() == 17);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(r[2 * i] == c[i]);
  CHECK(r[1] == doctest::Approx(std::sqrt(c[0] * c[1])));
  CHECK(c.locate(2.0) == 4);
  CHECK(c.locate(1e9) == 7);
  CHECK_THROWS_AS(RadialGrid({1.0, 1.0}), Error);

  double rr[4], w[4], s = 0;
  RadialGrid({1.0, 1.1}).element_rule(0, rr, w);
  for (int q = 0; q < 4; ++q) s += w[q] * rr[q] * rr[q];
  CHECK(s == doctest::Approx((1.331 - 1.0) / 3.0).epsilon(1e-12));
}

}
