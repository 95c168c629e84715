#include "circw1/logb_sequence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace circw1 {
namespace {

void check_args(int b, std::uint64_t k) {
  if (b < 2) throw std::domain_error("base must be an integer >= 2, got " + std::to_string(b));
  if (k == 0) throw std::domain_error("count must be positive");
  if (k > kMaxCount) throw std::domain_error("count " + std::to_string(k) + " exceeds the supported maximum " + std::to_string(kMaxCount));
}

// sum_{j=0}^{n-1} floor(i / b^j)
std::int64_t digit_shift_sum(std::uint64_t i, int b, int n) {
  std::int64_t s = 0;
  for (int j = 0; j < n && i > 0; ++j, i /= static_cast<std::uint64_t>(b)) s += static_cast<std::int64_t>(i);
  return s;
}

// sum_{j=0}^{n-1} b^(n-1-j) = (b^n - 1)/(b - 1)
std::int64_t repunit(int b, int n) {
  std::int64_t s = 0;
  for (int j = 0; j < n; ++j) s = s * b + 1;
  return s;
}

}  // namespace

LogSequenceSpec LogSequenceSpec::make(int base, std::uint64_t count) {
  return {base, count, digit_count(base, count)};
}

int digit_count(int b, std::uint64_t k) {
  check_args(b, k);
  const auto base = static_cast<std::uint64_t>(b);
  int d = 1;
  // p = b^(d-1); b^d <= k  <=>  p <= floor(k / b)
  for (std::uint64_t p = 1; p <= k / base; p *= base) ++d;
  return d;
}

std::uint64_t int_pow(int b, int e) {
  const auto base = static_cast<std::uint64_t>(b);
  std::uint64_t p = 1;
  for (int i = 0; i < e; ++i) {
    if (p > std::numeric_limits<std::uint64_t>::max() / base)
      throw std::domain_error(std::to_string(b) + "^" + std::to_string(e) + " overflows 64 bits");
    p *= base;
  }
  return p;
}

double frac_log(int b, std::uint64_t k) {
  const int d = digit_count(b, k);
  const std::uint64_t p = int_pow(b, d - 1);
  if (k == p) return 0.0;
  // k - p is exact, and the ratio is the same real number for k and b*k.
  const double r = std::log1p(static_cast<double>(k - p) / static_cast<double>(p)) / std::log(static_cast<double>(b));
  return r < 1.0 ? r : std::nextafter(1.0, 0.0);
}

CircleEmpirical build_nu(int b, std::uint64_t N) {
  check_args(b, N);
  std::vector<double> positions;
  positions.reserve(N);
  for (std::uint64_t k = 1; k <= N; ++k) positions.push_back(frac_log(b, k));
  return build_empirical(positions, b);
}

std::int64_t closed_form_count(int b, std::uint64_t N, std::uint64_t i) {
  const auto spec = LogSequenceSpec::make(b, N);
  const int n = spec.digits;
  const std::uint64_t p = int_pow(b, n - 1);
  if (i <= N / static_cast<std::uint64_t>(b) || i > N)
    throw std::domain_error("index must satisfy floor(N/b) < i <= N");
  const std::int64_t core = n + digit_shift_sum(i, b, n) - repunit(b, n);
  // Indices below b^(n-1) sit one turn further round the circle: every
  // n-digit k <= N precedes them.
  return i >= p ? core : static_cast<std::int64_t>(N) + core;
}

PiecewiseCdf closed_form_cdf(int b, std::uint64_t N) {
  check_args(b, N);
  if (N < static_cast<std::uint64_t>(b)) return cdf_of_empirical(build_nu(b, N));
  const int n = digit_count(b, N);
  const std::uint64_t p = int_pow(b, n - 1);
  const std::uint64_t wrap = N / static_cast<std::uint64_t>(b) + 1;
  const double count = static_cast<double>(N);
  const auto level = [&](std::uint64_t i) { return static_cast<double>(closed_form_count(b, N, i)) / count; };
  const auto start = [&](std::uint64_t i) { return i == p ? 1.0 : frac_log(b, i); };

  std::vector<CdfSegment> segs;
  segs.reserve(N - wrap + 2);
  for (std::uint64_t i = p; i < N; ++i) segs.push_back({frac_log(b, i), frac_log(b, i + 1), 0.0, level(i)});
  segs.push_back({frac_log(b, N), start(wrap), 0.0, level(N)});
  for (std::uint64_t i = wrap; i < p; ++i) segs.push_back({frac_log(b, i), start(i + 1), 0.0, level(i)});
  return PiecewiseCdf(b, std::move(segs));
}

double reference_rotation(int b, std::uint64_t N) {
  const double f = frac_log(b, N);
  if (f == 0.0) return 0.0;
  const double y = 1.0 - f;
  return y < 1.0 ? y : std::nextafter(1.0, 0.0);
}

}  // namespace circw1
