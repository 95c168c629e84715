#pragma once

#include <cstddef>
#include <optional>

#include "circw1/measure.hpp"

namespace circw1 {

// How a circle measure is cut open at s: D keeps the atom at s at the far end
// of [0,1] and uses F(s); I keeps it at 0 and uses F(s-).
enum class CutVariant { D, I };

struct OffsetInterval {
  double lo;
  double hi;
};

struct TransportResult {
  double distance = 0.0;
  // Optimal offset c* and the full interval of optimal offsets. All zero for
  // the line distance.
  double offset = 0.0;
  double offset_lo = 0.0;
  double offset_hi = 0.0;
  // A cut point with delta(s) == c* (variant D) or delta(s-) == c* (variant I).
  std::optional<double> cut;
  CutVariant cut_variant = CutVariant::D;
  std::size_t pieces = 0;
};

// Exact value of the integral over [0,1) of |delta(t) - c|. Each exponential
// piece is split at its closed-form root and integrated by antiderivative.
double integral_abs(const DeltaProfile& delta, double c);

// Lebesgue measure of {t in [0,1) : delta(t) <= c}.
double level_measure(const DeltaProfile& delta, double c);

// Every minimizer of c -> integral_abs(delta, c): all c with
// level_measure(c-) <= 1/2 <= level_measure(c).
OffsetInterval median_offset(const DeltaProfile& delta);

// Kantorovich distance on the interval [0,1]: integral of |F - G|.
TransportResult w1_line(const PiecewiseCdf& F, const PiecewiseCdf& G);
TransportResult w1_line(const DeltaProfile& delta);

// Kantorovich distance on the circle of circumference 1, as the minimum of
// integral_abs over the offset c; the minimizing offset is reported as the
// lower end of the median interval.
TransportResult w1_circle(const PiecewiseCdf& F, const PiecewiseCdf& G);
TransportResult w1_circle(const DeltaProfile& delta);

// Line distance between the two measures cut open at s.
double cut_distance(const PiecewiseCdf& F, const PiecewiseCdf& G, double s, CutVariant variant);

}  // namespace circw1
