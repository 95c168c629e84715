#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace circw1 {

// Which one-sided value of a right-continuous function to read at a point:
// right gives F(t), left gives F(t-).
enum class Side { right, left };

// Equal-weight atoms on the circle [0,1). Atoms are sorted; repeated
// positions carry multiplicity.
struct CircleEmpirical {
  int base = 10;
  std::vector<double> atoms;

  std::size_t count() const { return atoms.size(); }
};

// One piece of a piecewise function on [lo, hi) with value a * base^t + b.
// a == 0 encodes a constant piece of level b.
struct ExpSegment {
  double lo = 0.0;
  double hi = 1.0;
  double a = 0.0;
  double b = 0.0;

  bool is_constant() const { return a == 0.0; }
  // log_base is ln(base); the base itself never enters the hot loops.
  double value(double log_base, double t) const;
  double at_lo(double log_base) const { return value(log_base, lo); }
  // Limit from the left at hi.
  double at_hi(double log_base) const { return value(log_base, hi); }
};

using CdfSegment = ExpSegment;

// Right-continuous non-decreasing CDF on [0,1) made of constant and
// exponential pieces. Construction validates coverage and monotonicity and
// coalesces neighbouring pieces that share a formula.
class PiecewiseCdf {
public:
  PiecewiseCdf(int base, std::vector<CdfSegment> segments);

  int base() const { return base_; }
  double log_base() const { return log_base_; }
  std::span<const CdfSegment> segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool is_step() const;

  // Index of the piece whose [lo, hi) contains t.
  std::size_t locate(double t) const;

private:
  int base_;
  double log_base_;
  std::vector<CdfSegment> segments_;
};

// Pointwise difference of two piecewise CDFs over the common refinement of
// their breakpoints. Pieces may have either sign of a.
class DeltaProfile {
public:
  DeltaProfile(int base, std::vector<ExpSegment> segments);

  int base() const { return base_; }
  double log_base() const { return log_base_; }
  std::span<const ExpSegment> segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

  std::size_t locate(double t) const;
  // Smallest and largest value over the closure of every piece.
  double min_value() const;
  double max_value() const;

private:
  int base_;
  double log_base_;
  std::vector<ExpSegment> segments_;
};

// Atoms closer than this are treated as one position with multiplicity.
inline constexpr double kAtomMergeTolerance = 1e-15;

CircleEmpirical build_empirical(std::span<const double> positions, int base);

PiecewiseCdf cdf_of_empirical(const CircleEmpirical& m);

// CDF of the exponential law (b^t - 1)/(b - 1) rotated on the circle by y,
// i.e. pushed forward under x -> <x - y>.
PiecewiseCdf cdf_wrapped_exponential(int b, double y);

double eval_cdf(const PiecewiseCdf& F, double t, Side side = Side::right);

// Push-forward under x -> <x - y>. Rotating by y and then by <1 - y> is the
// identity. Step CDFs are rebuilt from their wrapped atoms.
PiecewiseCdf rotate_cdf(const PiecewiseCdf& F, double y);

DeltaProfile delta_profile(const PiecewiseCdf& F, const PiecewiseCdf& G);

double eval_delta(const DeltaProfile& d, double t, Side side = Side::right);

}  // namespace circw1
