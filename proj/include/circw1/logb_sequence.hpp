#pragma once

#include <cstdint>

#include "circw1/measure.hpp"

namespace circw1 {

// A base b and a count N, together with the number n of base-b digits of N,
// so that b^(n-1) <= N < b^n.
struct LogSequenceSpec {
  int base;
  std::uint64_t count;
  int digits;

  static LogSequenceSpec make(int base, std::uint64_t count);
};

// Largest count this module accepts: every integer up to it is exact in a
// double and every power of the base it needs fits in 64 bits.
inline constexpr std::uint64_t kMaxCount = (std::uint64_t{1} << 53) - 1;

// d with b^(d-1) <= k < b^d, by integer comparison only.
int digit_count(int b, std::uint64_t k);

// b^e as an exact integer; throws std::domain_error on 64-bit overflow.
std::uint64_t int_pow(int b, int e);

// <log_b k>, taken as log(significand)/log(b) with the significand
// k / b^(digit_count - 1) in [1, b). Exactly 0 for powers of b, and
// frac_log(b, b*k) == frac_log(b, k) bit for bit.
double frac_log(int b, std::uint64_t k);

// Empirical measure of <log_b k>, k = 1..N.
CircleEmpirical build_nu(int b, std::uint64_t N);

// N * F(t) at t = <log_b i> for floor(N/b) < i <= N, from the integer digit
// sums sum_j floor(i / b^j). Counts #{k <= N : <log_b k> <= <log_b i>}.
std::int64_t closed_form_count(int b, std::uint64_t N, std::uint64_t i);

// Step CDF of build_nu(b, N) assembled interval by interval from
// closed_form_count. Falls back to the direct construction when N < b.
PiecewiseCdf closed_form_cdf(int b, std::uint64_t N);

// <-log_b N> = n - log_b N in [0,1).
double reference_rotation(int b, std::uint64_t N);

}  // namespace circw1
