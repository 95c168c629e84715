#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "circw1/measure.hpp"
#include "circw1/transport.hpp"

namespace circw1::oracle {

// Weighted atoms on [0,1). Weights are positive and sum to 1.
struct AtomList {
  std::vector<double> positions;
  std::vector<double> weights;

  static AtomList equal_weights(std::vector<double> positions);
  std::size_t size() const { return positions.size(); }
};

inline constexpr std::size_t kBruteForceCap = 1000;

// Line distance by the monotone coupling: both quantile functions are
// walked together and every matched mass pays |x - y|.
double discrete_w1_line(const AtomList& a, const AtomList& b);

// Circle distance by cutting the circle open at every atom of either list,
// in both the D and I variants, and taking the smallest line distance.
// Throws std::domain_error past kBruteForceCap combined atoms.
double discrete_w1_circle(const AtomList& a, const AtomList& b);

// F^{-1}(u) = inf{t : F(t) >= u} for u in (0,1].
double cdf_inverse(const PiecewiseCdf& F, double u);

// m equal-weight atoms at the quantiles (k - 1/2)/m.
AtomList quantile_discretize(const PiecewiseCdf& F, std::size_t m);
AtomList quantile_discretize(const std::function<double(double)>& inverse_cdf, std::size_t m);

struct GridMinimum {
  double offset;
  double value;
};

// Best of integral_abs over a uniform grid of offsets on [min delta, max delta].
GridMinimum grid_minimize_offset(const DeltaProfile& delta, std::size_t grid_points);

// Step CDF of an atom list on the given base.
PiecewiseCdf step_cdf(const AtomList& atoms, int base = 10);

// Random equal-weight list of 1..max_atoms atoms. Positions are drawn on a
// coarse lattice half of the time so that ties and shared atoms occur.
AtomList random_atoms(std::mt19937_64& rng, std::size_t max_atoms);

struct OracleCheckReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double max_line_error = 0.0;
  double max_circle_error = 0.0;
};

// Compares the transport engine with the brute-force oracle on seeded random
// pairs. A trial fails when either distance differs by more than tolerance.
OracleCheckReport run_oracle_check(std::size_t trials, std::size_t max_atoms, std::uint64_t seed,
                                   double tolerance = 1e-9);

}  // namespace circw1::oracle
