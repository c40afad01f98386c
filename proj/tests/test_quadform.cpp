#include <cmath>

#include "doctest.h"
#include "hardy/error.hpp"
#include "hardy/quadform.hpp"

using namespace hardy;

namespace {

ModeForm power_form(double top_exp, double bottom_exp, double r_min, double r_max, Endpoint e) {
  ModeForm f;
  f.log_top = [top_exp](double r) { return top_exp * std::log(r); };
  f.log_bottom = [bottom_exp](double r) { return bottom_exp * std::log(r); };
  f.r_min = r_min;
  f.r_max = r_max;
  f.essential = e;
  return f;
}

}  // namespace

TEST_SUITE("quadform") {

TEST_CASE("two-node toy grid") {
  // one hat on [1, 2]: K = V / h, M = W h / 3
  ModeForm f;
  f.log_top = [](double) { return std::log(2.0); };
  f.log_bottom = [](double) { return std::log(5.0); };
  f.r_min = 1.0;
  f.r_max = 2.0;
  f.essential = Endpoint::Inner;
  auto mats = assemble_mode_form(f, RadialGrid({1.0, 2.0}));
  REQUIRE(mats.stiffness.size() == 1);
  CHECK(min_rayleigh(mats.stiffness, mats.mass) == doctest::Approx(3.0 * 2.0 / 5.0).epsilon(1e-6));
  CHECK(mats.nodes.front() == 2.0);
}

TEST_CASE("identity pencil") {
  Tridiagonal K{{2.0, 2.0, 2.0}, {0.5, 0.5}};
  CHECK(min_rayleigh(K, K) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tridiagonal eigen against a closed form") {
  // second difference: eigenvalues 2 - 2 cos(j pi/(n+1))
  const std::size_t n = 50;
  Tridiagonal K{std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0)};
  Tridiagonal M{std::vector<double>(n, 1.0), std::vector<double>(n - 1, 0.0)};
  auto e = min_rayleigh_detailed(K, M);
  CHECK(e.value == doctest::Approx(2 - 2 * std::cos(M_PI / (n + 1))).epsilon(1e-12));
  CHECK(e.residual <= 1e-9);
  CHECK(count_below(K, M, 2 - 2 * std::cos(2 * M_PI / (n + 1)) + 1e-9) == 2);
}

TEST_CASE("assembled matrices are symmetric and positive") {
  auto f = power_form(1.0, 1.0, 1e-3, 1e3, Endpoint::Outer);
  f.log_bottom = [](double r) { return std::log(r) - std::log1p(r * r); };
  auto mats = assemble_mode_form(f, RadialGrid::log_spaced(1e-3, 1e3, 200));
  CHECK(mats.stiffness.size() == 199);
  for (std::size_t i = 0; i < mats.mass.size(); ++i) {
    CHECK(mats.mass.diag[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mats.stiffness.diag[i] > 0.0);
  }
  // diagonally dominant up to the free end: PSD
  for (std::size_t i = 1; i + 1 < mats.stiffness.size(); ++i) CHECK(mats.stiffness.off[i] < 0.0);
  CHECK(min_rayleigh(mats.stiffness, mats.mass) > 0.0);
}

TEST_CASE("classical Hardy constant 1/4") {
  double prev = 1e9;
  for (double d : {2.0, 4.0, 8.0, 30.0}) {
    auto f = power_form(0.0, -2.0, std::pow(10.0, -d), std::pow(10.0, d), Endpoint::Inner);
    FormOptions o{d, 2048};
    auto g = RadialGrid::centered(1.0, d, 2048);
    auto mats = assemble_mode_form(f, g);
    double v = min_rayleigh(mats.stiffness, mats.mass);
    CHECK(v >= 0.25);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("singular weight") {
  auto f = power_form(1.0, -1.0, 0.1, 10.0, Endpoint::Inner);
  f.log_top = [](double r) { return r > 1.0 && r < 2.0 ? -INFINITY : 0.0; };
  try {
    assemble_mode_form(f, RadialGrid::log_spaced(0.1, 10.0, 50));
    FAIL("expected SingularWeight");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularWeight);
  }
}

TEST_CASE("Aharonov-Bohm modes") {
  FormOptions o;
  auto c1 = check_mode(ab_mode_form(1, 0.5, Spin::Plus), CaseTag::ABPlus, 0.25, 1.0, false, o);
  CHECK(c1.numeric_min >= 0.25);
  CHECK(c1.pass);
  auto c0 = check_mode(ab_mode_form(0, 0.5, Spin::Plus), CaseTag::ABPlus, 0.25, 1.0, false, o);
  CHECK(c0.numeric_min == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("refinement and truncation diagnostics") {
  auto p = make_regular_mode(0, 0.4, 1.0);
  auto c = check_mode(regular_mode_form(p), p.tag, mode_constant_closed_form(p), 1.0, true, FormOptions{});
  REQUIRE(c.refinement.size() == 3);
  CHECK(c.monotone);
  CHECK(c.refinement[1] <= c.refinement[0]);
  CHECK(c.refinement[2] <= c.refinement[1]);
  CHECK(c.truncation_change < kTruncationTol);
  CHECK(c.numeric_min >= 0.16);
}

TEST_CASE("verify_theorem on B_n") {
  VerifyOptions o;
  auto r = verify_theorem(0.4, 1.0, make_bn(0.4, 8), {-3, 5}, false, o);
  CHECK(r.verified);
  CHECK(r.bound == doctest::Approx(0.16 * std::exp(-0.08)).epsilon(1e-10));
  CHECK(r.modes.size() == 9);
  for (const auto& m : r.modes) CHECK(m.numeric_min >= m.closed_form - kModeSlack);
  CHECK(r.theorem == "ThmNonInteger");
  CHECK(r.worst_margin >= -kModeSlack);

  auto z = verify_theorem(0.0, 1.0, make_zero_field(), {-3, 5}, false, o);
  CHECK(z.bound == 0.0);
  CHECK(z.modes.empty());
  CHECK(z.note.find("alpha=0") != std::string::npos);

  CHECK_THROWS_AS(verify_theorem(0.5, 1.0, make_bn(0.4, 8), {-1, 1}, false, o), Error);
  CHECK_THROWS_AS(verify_theorem(0.4, 1.0, make_bn(0.4, 8), {-1, 1}, true, o), Error);
}

TEST_CASE("integer flux, mode m = alpha") {
  VerifyOptions o;
  auto r = verify_theorem(1.0, 1.0, make_bn(1.0, 8), {0, 2}, true, o);
  CHECK(r.verified);
  CHECK(r.theorem == "ThmInteger");
  const auto& m1 = r.modes[1];
  CHECK(m1.m == 1);
  CHECK(m1.tag == CaseTag::MEqualsAlphaInteger);
  CHECK(m1.numeric_min >= 1.0 / (4 + M_PI) - 1e-3);
}

TEST_CASE("minus spin mirrors the plus spin") {
  VerifyOptions o;
  auto p = verify_theorem(0.4, 1.0, make_bn(0.4, 8), {-2, 2}, false, o);
  auto m = verify_theorem(-0.4, 1.0, make_bn(-0.4, 8), {-2, 2}, false, o);
  CHECK(m.theorem == "ThmMinusSpin");
  CHECK(m.verified);
  CHECK(m.bound == doctest::Approx(p.bound).epsilon(1e-12));
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(m.modes[i].numeric_min == doctest::Approx(p.modes[4 - i].numeric_min).epsilon(1e-12));
}

TEST_CASE("ab_verify") {
  VerifyOptions o;
  auto r = ab_verify(0.5, Spin::Plus, {-3, 5}, o);
  CHECK(r.modes.verified);
  CHECK(r.modes.bound == doctest::Approx(0.25));
  for (const auto& m : r.modes.modes) CHECK(m.numeric_min >= 0.25 - kModeSlack);
  CHECK(r.modes.modes[3].numeric_min == doctest::Approx(0.25).epsilon(0.01));
  CHECK(r.modes.modes[4].numeric_min == doctest::Approx(0.25).epsilon(0.01));
  CHECK(r.sharpness.size() == 3);

  auto z = ab_verify(0.0, Spin::Plus, {-1, 1}, o);
  CHECK(z.modes.bound == 0.0);
  CHECK(z.modes.note.find("trivially") != std::string::npos);

  auto n = ab_verify(-0.3, Spin::Minus, {-2, 2}, o);
  CHECK(n.modes.bound == doctest::Approx(0.09));
  CHECK(n.modes.verified);
  CHECK_THROWS_AS(ab_verify(1.2, Spin::Plus, {-1, 1}, o), Error);
}

TEST_CASE("modes strictly between 0 and alpha") {
  // both ends essential; the inner piece alone allows m^2, so the stated
  // (m - alpha)^2 only holds for m >= alpha / 2
  VerifyOptions o;
  auto r = verify_theorem(2.5, 1.0, make_bn(2.5, 8), {1, 2}, false, o);
  REQUIRE(r.modes.size() == 2);
  CHECK(r.modes[0].tag == CaseTag::MBetweenZeroAlpha);
  CHECK(r.modes[0].numeric_min == doctest::Approx(1.0).epsilon(5e-3));
  CHECK_FALSE(r.modes[0].pass);
  CHECK(r.modes[1].numeric_min == doctest::Approx(0.25).epsilon(1e-2));
  CHECK(r.modes[1].pass);
  CHECK_FALSE(r.verified);
  // the theorem constant itself survives
  CHECK(r.numeric_constant >= r.bound);

  auto q = verify_theorem(2.0, 1.0, make_bn(2.0, 8), {1, 1}, true, o);
  CHECK(q.modes[0].numeric_min == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(q.modes[0].pass);
}

TEST_CASE("report serialisation") {
  VerifyOptions o;
  auto r = verify_theorem(0.5, 1.0, make_bn(0.5, 2), {0, 1}, false, o);
  auto j = summary_json(r);
  CHECK(j["theorem"] == "ThmNonInteger");
  CHECK(j["alpha"].get<double>() == 0.5);
  CHECK(j["rho"].get<double>() == 1.0);
  CHECK(j["verified"].get<bool>());
  CHECK(j.contains("worst_margin"));
  CHECK(j.contains("bound"));
  CHECK(mode_csv_header().rfind("m,case_tag,closed_form,numeric_min,margin,pass", 0) == 0);
  CHECK(to_csv_row(r.modes[0]).rfind("0,MZero,0.25,", 0) == 0);
}

}
