#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "circw1/logb_sequence.hpp"
#include "support.hpp"

using namespace circw1;
using circw1::testing::kSeed;

namespace {

// k padded to a fixed digit length D, so comparing padded values compares
// significands exactly.
std::uint64_t padded(int b, std::uint64_t k, int D) {
  int d = 0;
  for (std::uint64_t x = k; x > 0; x /= static_cast<std::uint64_t>(b)) ++d;
  std::uint64_t v = k;
  for (int j = d; j < D; ++j) v *= static_cast<std::uint64_t>(b);
  return v;
}

std::int64_t direct_count(int b, std::uint64_t N, std::uint64_t i) {
  int D = 0;
  for (std::uint64_t x = N; x > 0; x /= static_cast<std::uint64_t>(b)) ++D;
  const std::uint64_t s = padded(b, i, D);
  std::int64_t c = 0;
  for (std::uint64_t k = 1; k <= N; ++k)
    if (padded(b, k, D) <= s) ++c;
  return c;
}

}  // namespace

TEST_CASE("digit_count") {
  CHECK(digit_count(10, 1) == 1);
  CHECK(digit_count(10, 9) == 1);
  CHECK(digit_count(10, 999) == 3);
  CHECK(digit_count(10, 1000) == 4);
  CHECK(digit_count(2, 8) == 4);
  CHECK(digit_count(2, 7) == 3);
  CHECK(digit_count(10, 9'007'199'254'740'991ULL) == 16);
  CHECK_THROWS_AS(digit_count(10, 0), std::domain_error);
  CHECK_THROWS_AS(digit_count(1, 5), std::domain_error);
}

TEST_CASE("int_pow") {
  CHECK(int_pow(10, 0) == 1);
  CHECK(int_pow(10, 6) == 1'000'000);
  CHECK(int_pow(2, 63) == (std::uint64_t{1} << 63));
  CHECK_THROWS(int_pow(2, 64));
}

TEST_CASE("frac_log values") {
  CHECK(frac_log(10, 1) == 0.0);
  CHECK(frac_log(10, 1000) == 0.0);
  CHECK(std::abs(frac_log(10, 20) - 0.301029995663981195) <= 1e-15);
  CHECK(std::abs(frac_log(2, 3) - 0.584962500721156181) <= 1e-15);
  CHECK(frac_log(10, 999) < 1.0);
  CHECK(frac_log(10, 9'007'199'254'740'991ULL) < 1.0);
}

TEST_CASE("frac_log is invariant under multiplication by the base") {
  for (int b : {2, 3, 10}) {
    for (std::uint64_t k = 1; k <= 100'000; ++k) REQUIRE(frac_log(b, k * static_cast<std::uint64_t>(b)) == frac_log(b, k));
    for (int e = 0; int_pow(b, e) <= 1'000'000'000ULL; ++e) CHECK(frac_log(b, int_pow(b, e)) == 0.0);
  }
}

TEST_CASE("LogSequenceSpec") {
  const auto s = LogSequenceSpec::make(10, 1000);
  CHECK(s.digits == 4);
  CHECK_THROWS_AS(LogSequenceSpec::make(1, 10), std::domain_error);
  CHECK_THROWS_AS(LogSequenceSpec::make(10, 0), std::domain_error);
  CHECK_THROWS_AS(LogSequenceSpec::make(10, kMaxCount + 1), std::domain_error);
}

TEST_CASE("nu_N atoms") {
  const auto nu = build_nu(10, 10);
  CHECK(nu.count() == 10);
  CHECK(std::count(nu.atoms.begin(), nu.atoms.end(), 0.0) == 2);
  CHECK(build_nu(2, 1).atoms == std::vector<double>{0.0});
  CHECK(build_nu(2, 2).atoms == std::vector<double>{0.0, 0.0});
}

TEST_CASE("closed-form CDF examples") {
  const auto F = closed_form_cdf(10, 10);
  CHECK(std::abs(eval_cdf(F, 0.0) - 0.2) <= 1e-15);
  CHECK(std::abs(eval_cdf(F, 0.5) - 0.4) <= 1e-15);
  CHECK(std::abs(eval_cdf(F, std::nextafter(1.0, 0.0)) - 1.0) <= 1e-15);
}

TEST_CASE("reference rotation") {
  CHECK(reference_rotation(10, 100) == 0.0);
  CHECK(std::abs(reference_rotation(10, 20) - 0.698970004336018805) <= 1e-15);
  CHECK(std::abs(reference_rotation(2, 3) - 0.415037499278843819) <= 1e-15);
}

TEST_CASE("closed-form count equals a direct integer count") {
  CHECK_THROWS_AS(closed_form_count(10, 100, 10), std::domain_error);
  CHECK_THROWS_AS(closed_form_count(10, 100, 101), std::domain_error);
  for (int b : {2, 3, 10})
    for (std::uint64_t N = 1; N <= 300; ++N)
      for (std::uint64_t i = N / static_cast<std::uint64_t>(b) + 1; i <= N; ++i)
        REQUIRE(closed_form_count(b, N, i) == direct_count(b, N, i));

  std::mt19937_64 rng(kSeed);
  for (int trial = 0; trial < 100; ++trial) {
    const int b = std::array{2, 3, 10}[static_cast<std::size_t>(trial % 3)];
    const std::uint64_t N = std::uniform_int_distribution<std::uint64_t>(300, 50'000)(rng);
    std::uniform_int_distribution<std::uint64_t> pick(N / static_cast<std::uint64_t>(b) + 1, N);
    for (int k = 0; k < 5; ++k) {
      const std::uint64_t i = pick(rng);
      REQUIRE(closed_form_count(b, N, i) == direct_count(b, N, i));
    }
  }
}

TEST_CASE("closed-form CDF equals the empirical CDF") {
  std::mt19937_64 rng(kSeed + 1);
  for (int b : {2, 3, 10}) {
    for (std::uint64_t N = 1; N <= 2000; N += (N < 300 ? 1 : 37)) {
      const auto closed = closed_form_cdf(b, N);
      const auto nu = build_nu(b, N);
      const auto emp = cdf_of_empirical(nu);
      for (int k = 0; k < 100; ++k) {
        const double t = k % 2 ? testing::unit(rng) : nu.atoms[static_cast<std::size_t>(k) % nu.count()];
        REQUIRE(std::abs(eval_cdf(closed, t) - eval_cdf(emp, t)) <= 1e-12);
        REQUIRE(std::abs(eval_cdf(closed, t, Side::left) - eval_cdf(emp, t, Side::left)) <= 1e-12);
      }
    }
  }
}
