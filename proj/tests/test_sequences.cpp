#include <cmath>

#include "doctest.h"
#include "hardy/error.hpp"
#include "hardy/quadform.hpp"
#include "hardy/quadrature.hpp"

using namespace hardy;

namespace {

TestSequence seq(TestSequence::Kind k, long long n, double alpha = 0.0, int kk = 0, Spin s = Spin::Plus) {
  TestSequence t;
  t.kind = k;
  t.n = n;
  t.alpha = alpha;
  t.k = kk;
  t.spin = s;
  return t;
}

// 2 pi int (u'^2 + alpha^2 u^2 / r^2) r dr by plain quadrature in r
double brute_prop_sharp(double n, double alpha) {
  const double e = std::exp(1.0);
  auto f = [&](double r) {
    double u, d;
    if (r <= e * n) { u = std::log(r / n); d = 1 / r; }
    else if (r <= n * n) { u = 1; d = 0; }
    else { u = std::log(e * n * n / r); d = -1 / r; }
    return (d * d + alpha * alpha * u * u / (r * r)) * r;
  };
  return 2 * M_PI * quad::integrate_piecewise(f, n, e * n * n, {e * n, n * n});
}

}  // namespace

TEST_SUITE("sequences") {

TEST_CASE("PropSharp numerator against quadrature") {
  for (long long n : {10LL, 100LL, 1000LL}) {
    auto row = evaluate_sequence(seq(TestSequence::Kind::PropSharp, n), make_bn(0.4, 8));
    CHECK(row.numerator == doctest::Approx(brute_prop_sharp(double(n), 0.4)).epsilon(1e-9));
    CHECK(row.quotient == doctest::Approx(row.numerator / row.denominator));
  }
}

TEST_CASE("PropSharp decreases toward alpha^2") {
  std::vector<long long> ns{100, 1000, 10000};
  std::vector<double> q;
  for (auto n : ns) q.push_back(rayleigh_of_sequence(seq(TestSequence::Kind::PropSharp, n), make_bn(0.4, 8)));
  CHECK(q[0] > q[1]);
  CHECK(q[1] > q[2]);
  CHECK(q[2] > 0.16);
  CHECK(extrapolate_log_limit(ns, q) == doctest::Approx(0.16).epsilon(0.02));
}

TEST_CASE("PropSharp support overlap") {
  RadialProfile p = RadialProfile::from_function([](double r) { return r < 50 ? 1e-4 : 0.0; },
                                                 RadialGrid::log_spaced(1e-3, 100, 400), {50});
  try {
    evaluate_sequence(seq(TestSequence::Kind::PropSharp, 10), make_radial(p));
    FAIL("expected SupportOverlap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupportOverlap);
  }
  CHECK_THROWS_AS(evaluate_sequence(seq(TestSequence::Kind::PropSharp, 2), make_bn(0.4, 8)), Error);
}

TEST_CASE("ABSharp against the piecewise closed form") {
  // Q = k^2/(2a) + 2 g^2 L + 1 - g + g^2/3, D = 1/(2a) + 2L + 1/3, g = k - alpha
  for (double a : {0.25, 0.5, 0.75})
    for (int k : {0, 1}) {
      const long long n = 1000;
      const double L = std::log(1000.0), g = k - a;
      const double Q = k * k / (2 * a) + 2 * g * g * L + 1 - g + g * g / 3;
      const double D = 1 / (2 * a) + 2 * L + 1.0 / 3;
      auto row = evaluate_sequence(seq(TestSequence::Kind::ABSharp, n, a, k), make_ab(a));
      CHECK(row.numerator == doctest::Approx(2 * M_PI * Q).epsilon(1e-9));
      CHECK(row.denominator == doctest::Approx(2 * M_PI * D).epsilon(1e-9));
    }
}

TEST_CASE("ABSharp negative flux and minus spin") {
  // alpha < 0: inner piece (n r)^{|alpha|}; minus spin uses alpha - k
  const double a = -0.3, L = std::log(100.0);
  const double g = a - 0;  // minus spin, k = 0
  const double Q = (0.3 + g) * (0.3 + g) / 0.6 + 2 * g * g * L + 1 - g + g * g / 3;
  const double D = 1 / 0.6 + 2 * L + 1.0 / 3;
  auto row = evaluate_sequence(seq(TestSequence::Kind::ABSharp, 100, a, 0, Spin::Minus), make_ab(a));
  CHECK(row.quotient == doctest::Approx(Q / D).epsilon(1e-9));
  CHECK_THROWS_AS(evaluate_sequence(seq(TestSequence::Kind::ABSharp, 100), make_bn(0.4, 8)), Error);
}

TEST_CASE("ABSharp decreases and stays above mu^2") {
  double prev = 1e9;
  for (long long n : {100LL, 1000LL, 10000LL}) {
    double q = rayleigh_of_sequence(seq(TestSequence::Kind::ABSharp, n, 0.25, 0), make_ab(0.25));
    CHECK(q < prev);
    CHECK(q >= 0.0625 - 1e-6);
    prev = q;
  }
}

TEST_CASE("PropL1 denominator grows like 2 pi log n") {
  std::vector<long long> ns{10, 100, 1000, 10000};
  std::vector<double> d;
  for (auto n : ns) {
    auto row = evaluate_sequence(seq(TestSequence::Kind::PropL1, n), make_bn(1.0, 8));
    d.push_back(row.denominator);
    CHECK(row.log_denominator < row.denominator);
    CHECK(row.numerator > 0.0);
  }
  CHECK(log_slope(ns, d) == doctest::Approx(2 * M_PI).epsilon(0.05));
}

TEST_CASE("PropL1 zero field reduces to the free form") {
  // alpha = 0: numerator is 2 pi int u'^2 r dr = 2 pi * 2
  auto row = evaluate_sequence(seq(TestSequence::Kind::PropL1, 100), make_zero_field());
  CHECK(row.numerator == doctest::Approx(4 * M_PI).epsilon(1e-9));
}

TEST_CASE("extrapolation and slope helpers") {
  std::vector<long long> ns{100, 1000, 10000};
  std::vector<double> q;
  for (auto n : ns) {
    double L = std::log(double(n));
    q.push_back(0.3 + 2 / L - 5 / (L * L));
  }
  CHECK(extrapolate_log_limit(ns, q) == doctest::Approx(0.3).epsilon(1e-12));
  std::vector<double> y;
  for (auto n : ns) y.push_back(1.5 * std::log(double(n)) + 2);
  CHECK(log_slope(ns, y) == doctest::Approx(1.5));
  CHECK_THROWS_AS(extrapolate_log_limit({1, 2}, {1, 2}), Error);
}

}
