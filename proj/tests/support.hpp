#pragma once

// Shared fixtures and independent reference computations for the test
// binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "circw1/measure.hpp"
#include "circw1/oracle.hpp"
#include "circw1/transport.hpp"

namespace circw1::testing {

inline constexpr std::uint64_t kSeed = 0x5eed2024;

inline double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Random step CDF with up to max_atoms equal-weight atoms.
inline PiecewiseCdf random_step(std::mt19937_64& rng, std::size_t max_atoms, int base = 10) {
  return oracle::step_cdf(oracle::random_atoms(rng, max_atoms), base);
}

inline PiecewiseCdf random_wrapped(std::mt19937_64& rng, int base) {
  return cdf_wrapped_exponential(base, unit(rng));
}

// A step or a rotated exponential CDF, chosen at random, on the given base.
inline PiecewiseCdf random_cdf(std::mt19937_64& rng, int base, std::size_t max_atoms = 30) {
  return std::bernoulli_distribution(0.5)(rng) ? random_step(rng, max_atoms, base) : random_wrapped(rng, base);
}

// Midpoint-rule quadrature of |delta(t) - c| using only pointwise evaluation.
inline double quadrature_abs(const DeltaProfile& d, double c, std::size_t points = 400'000) {
  double s = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(points);
    s += std::abs(eval_delta(d, t) - c);
  }
  return s / static_cast<double>(points);
}

// Circle distance between two equal-count equal-weight atom lists by
// enumerating every matching under the geodesic metric.
inline double permutation_w1_circle(std::vector<double> a, std::vector<double> b) {
  std::sort(b.begin(), b.end());
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = std::abs(a[i] - b[i]);
      s += std::min(d, 1.0 - d);
    }
    best = std::min(best, s / static_cast<double>(a.size()));
  } while (std::next_permutation(b.begin(), b.end()));
  return best;
}

inline double permutation_w1_line(std::vector<double> a, std::vector<double> b) {
  std::sort(b.begin(), b.end());
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    best = std::min(best, s / static_cast<double>(a.size()));
  } while (std::next_permutation(b.begin(), b.end()));
  return best;
}

// Cut candidates: every breakpoint of both CDFs plus every interior point
// where delta crosses the optimal offset, found from pointwise values only.
inline std::vector<double> cut_candidates(const PiecewiseCdf& F, const PiecewiseCdf& G, const DeltaProfile& d, double c) {
  std::vector<double> s{0.0};
  for (const auto& seg : F.segments()) s.push_back(seg.lo);
  for (const auto& seg : G.segments()) s.push_back(seg.lo);
  for (const auto& seg : d.segments()) {
    if (seg.is_constant()) continue;
    double lo = seg.lo, hi = seg.hi;
    double flo = eval_delta(d, lo) - c, fhi = eval_delta(d, std::nextafter(hi, lo)) - c;
    if (flo * fhi > 0.0) continue;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      if ((eval_delta(d, mid) - c) * flo > 0.0) lo = mid; else hi = mid;
    }
    s.push_back(lo);
    s.push_back(hi);
  }
  std::erase_if(s, [](double t) { return t >= 1.0; });
  return s;
}

inline double best_cut(const PiecewiseCdf& F, const PiecewiseCdf& G, const DeltaProfile& d, double c) {
  double best = INFINITY;
  for (double s : cut_candidates(F, G, d, c))
    for (auto v : {CutVariant::D, CutVariant::I}) best = std::min(best, cut_distance(F, G, s, v));
  return best;
}

}  // namespace circw1::testing
