#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "circw1/logb_sequence.hpp"
#include "circw1/transport.hpp"
#include "support.hpp"

using namespace circw1;
using circw1::testing::kSeed;
using circw1::testing::unit;

namespace {

constexpr double kTwoMinusInvLn2 = 0.557304959111036593;  // 2 - 1/ln 2
constexpr double kCircleTwo = 0.247527336279732295;       // (3 - 2 sqrt 2)/ln 2
constexpr double kTwoMinusSqrt2 = 0.585786437626904951;

PiecewiseCdf dirac(double x, int base = 10) { return cdf_of_empirical(build_empirical(std::vector<double>{x}, base)); }

// delta(t) = 2 - 2^t on [0,1)
DeltaProfile two_minus_exp() { return delta_profile(dirac(0.0, 2), cdf_wrapped_exponential(2, 0.0)); }

}  // namespace

TEST_CASE("integral_abs closed values") {
  const auto e2 = cdf_wrapped_exponential(2, 0.0);
  CHECK(integral_abs(delta_profile(e2, e2), 0.0) == 0.0);
  const auto d = two_minus_exp();
  CHECK(std::abs(integral_abs(d, 0.0) - kTwoMinusInvLn2) <= 1e-14);
  CHECK(std::abs(integral_abs(d, kTwoMinusSqrt2) - kCircleTwo) <= 1e-14);
  CHECK(std::abs(integral_abs(d, 1.0) - 0.442695040888963407) <= 1e-14);
}

TEST_CASE("integral_abs agrees with midpoint quadrature") {
  std::mt19937_64 rng(kSeed);
  for (int trial = 0; trial < 30; ++trial) {
    const int base = trial % 2 ? 2 : 10;
    const auto d = delta_profile(testing::random_cdf(rng, base, 12), testing::random_cdf(rng, base, 12));
    const double c = d.min_value() + unit(rng) * (d.max_value() - d.min_value());
    CHECK(std::abs(integral_abs(d, c) - testing::quadrature_abs(d, c)) <= 1e-5);
  }
}

TEST_CASE("level_measure") {
  const auto d = two_minus_exp();
  CHECK(level_measure(d, 1.0) == 1.0);
  CHECK(level_measure(d, 0.0) == 0.0);
  CHECK(std::abs(level_measure(d, kTwoMinusSqrt2) - 0.5) <= 1e-15);

  std::mt19937_64 rng(kSeed + 1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = delta_profile(testing::random_cdf(rng, 10), testing::random_cdf(rng, 10));
    CHECK(level_measure(p, p.min_value() - 1e-9) == 0.0);
    CHECK(level_measure(p, p.max_value()) == 1.0);
    double prev = 0.0;
    for (int k = 0; k <= 50; ++k) {
      const double c = p.min_value() + k / 50.0 * (p.max_value() - p.min_value());
      const double m = level_measure(p, c);
      CHECK(m >= prev);
      prev = m;
    }
  }
}

TEST_CASE("median_offset") {
  const auto e2 = cdf_wrapped_exponential(2, 0.0);
  const auto z = median_offset(delta_profile(e2, e2));
  CHECK(z.lo == 0.0);
  CHECK(z.hi == 0.0);

  const auto m = median_offset(two_minus_exp());
  CHECK(std::abs(m.lo - kTwoMinusSqrt2) <= 1e-15);
  CHECK(std::abs(m.hi - kTwoMinusSqrt2) <= 1e-15);

  // delta = 1 on [0,1/2), 0 on [1/2,1)
  const auto step = delta_profile(dirac(0.0), dirac(0.5));
  const auto hm = median_offset(step);
  CHECK(hm.lo == 0.0);
  CHECK(hm.hi == 1.0);
  CHECK(std::abs(integral_abs(step, 0.3) - 0.5) <= 1e-15);
}

TEST_CASE("distance examples") {
  const auto e2 = cdf_wrapped_exponential(2, 0.0);
  CHECK(w1_line(e2, e2).distance == 0.0);
  CHECK(w1_circle(e2, e2).distance == 0.0);

  CHECK(std::abs(w1_line(dirac(0.0), dirac(0.75)).distance - 0.75) <= 1e-15);
  const auto c = w1_circle(dirac(0.0), dirac(0.75));
  CHECK(std::abs(c.distance - 0.25) <= 1e-15);

  const auto nu2 = closed_form_cdf(2, 2);
  const auto ref = cdf_wrapped_exponential(2, reference_rotation(2, 2));
  CHECK(std::abs(w1_line(nu2, ref).distance - kTwoMinusInvLn2) <= 1e-14);
  const auto r = w1_circle(nu2, ref);
  CHECK(std::abs(r.distance - kCircleTwo) <= 1e-14);
  CHECK(std::abs(r.offset - kTwoMinusSqrt2) <= 1e-14);
  REQUIRE(r.cut.has_value());
  CHECK(std::abs(*r.cut - 0.5) <= 1e-14);
  CHECK(std::abs(cut_distance(nu2, ref, *r.cut, r.cut_variant) - r.distance) <= 1e-14);
}

TEST_CASE("cut_distance examples") {
  const auto a = dirac(0.0), b = dirac(0.75);
  CHECK(std::abs(cut_distance(a, b, 0.0, CutVariant::I) - 0.75) <= 1e-15);
  CHECK(std::abs(cut_distance(a, b, 0.0, CutVariant::D) - 0.25) <= 1e-15);
  CHECK(std::abs(cut_distance(a, b, 0.5, CutVariant::D) - 0.25) <= 1e-15);
}

TEST_CASE("the circle objective is convex and minimized at c*") {
  std::mt19937_64 rng(kSeed + 2);
  for (int trial = 0; trial < 100; ++trial) {
    const int base = trial % 2 ? 2 : 10;
    const auto d = delta_profile(testing::random_cdf(rng, base), testing::random_cdf(rng, base));
    const auto r = w1_circle(d);
    CHECK(std::abs(integral_abs(d, r.offset) - r.distance) <= 1e-15);
    CHECK(r.offset_lo <= r.offset_hi);
    CHECK(std::abs(integral_abs(d, r.offset_hi) - r.distance) <= 1e-12);
    const double span = d.max_value() - d.min_value() + 1.0;
    for (int k = 0; k < 200; ++k) {
      const double c1 = d.min_value() - 0.5 + unit(rng) * span;
      const double c2 = d.min_value() - 0.5 + unit(rng) * span;
      CHECK(integral_abs(d, c1) >= r.distance - 1e-12);
      CHECK(integral_abs(d, 0.5 * (c1 + c2)) <= 0.5 * (integral_abs(d, c1) + integral_abs(d, c2)) + 1e-12);
    }
  }
}

TEST_CASE("the circle distance is the best line distance over cuts") {
  std::mt19937_64 rng(kSeed + 3);
  for (int trial = 0; trial < 100; ++trial) {
    const int base = trial % 2 ? 2 : 10;
    const auto F = testing::random_cdf(rng, base), G = testing::random_cdf(rng, base);
    const auto d = delta_profile(F, G);
    const auto r = w1_circle(d);
    CHECK(std::abs(testing::best_cut(F, G, d, r.offset) - r.distance) <= 1e-10);
    REQUIRE(r.cut.has_value());
    CHECK(std::abs(cut_distance(F, G, *r.cut, r.cut_variant) - r.distance) <= 1e-10);
  }
}

TEST_CASE("metric properties") {
  std::mt19937_64 rng(kSeed + 4);
  for (int trial = 0; trial < 100; ++trial) {
    const int base = trial % 2 ? 2 : 10;
    const auto F = testing::random_cdf(rng, base), G = testing::random_cdf(rng, base), H = testing::random_cdf(rng, base);
    const double fg = w1_circle(F, G).distance, gf = w1_circle(G, F).distance;
    CHECK(std::abs(fg - gf) <= 1e-14);
    CHECK(fg <= w1_circle(F, H).distance + w1_circle(H, G).distance + 1e-12);
    const double lfg = w1_line(F, G).distance;
    CHECK(std::abs(lfg - w1_line(G, F).distance) <= 1e-14);
    CHECK(lfg <= w1_line(F, H).distance + w1_line(H, G).distance + 1e-12);
    CHECK(fg >= 0.0);
    CHECK(fg <= lfg + 1e-15);
    CHECK(fg <= 0.5 + 1e-15);
    const double y = unit(rng);
    CHECK(std::abs(w1_circle(rotate_cdf(F, y), rotate_cdf(G, y)).distance - fg) <= 1e-10);
  }
}
