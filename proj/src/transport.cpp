#include "circw1/transport.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "circw1/compensated_sum.hpp"

namespace circw1 {
namespace {

constexpr double kHalf = 0.5;

// Signed integral of a*e^(L t) + (b - c) over [u, v]; expm1 keeps thin
// pieces accurate.
double piece_integral(const ExpSegment& s, double log_base, double c, double u, double v) {
  const double w = v - u;
  if (s.a == 0.0) return (s.b - c) * w;
  return s.a * std::exp(log_base * u) * std::expm1(log_base * w) / log_base + (s.b - c) * w;
}

// Endpoint values cached so that only pieces straddling c need a logarithm.
class LevelTable {
public:
  explicit LevelTable(const DeltaProfile& d) : log_base_(d.log_base()), segs_(d.segments()) {
    vmin_.reserve(segs_.size());
    vmax_.reserve(segs_.size());
    for (const auto& s : segs_) {
      const double v0 = s.at_lo(log_base_);
      const double v1 = s.at_hi(log_base_);
      vmin_.push_back(std::min(v0, v1));
      vmax_.push_back(std::max(v0, v1));
    }
  }

  std::size_t size() const { return segs_.size(); }
  double log_base() const { return log_base_; }
  double vmin(std::size_t i) const { return vmin_[i]; }
  double vmax(std::size_t i) const { return vmax_[i]; }
  const ExpSegment& segment(std::size_t i) const { return segs_[i]; }

  // Measure of {delta <= c}, or {delta < c} when strict, on piece i.
  double piece_measure(std::size_t i, double c, bool strict) const {
    const auto& s = segs_[i];
    const double w = s.hi - s.lo;
    if (s.is_constant()) return (strict ? s.b < c : s.b <= c) ? w : 0.0;
    if (c >= vmax_[i]) return w;
    if (c <= vmin_[i]) return 0.0;
    return crossing_measure(s, c);
  }

  // For a non-constant piece whose range contains c.
  double crossing_measure(const ExpSegment& s, double c) const {
    const double t = std::clamp(std::log((c - s.b) / s.a) / log_base_, s.lo, s.hi);
    return s.a > 0.0 ? t - s.lo : s.hi - t;
  }

  double measure(double c, bool strict = false) const {
    CompensatedSum sum;
    for (std::size_t i = 0; i < segs_.size(); ++i) sum += piece_measure(i, c, strict);
    return sum.value();
  }

  std::vector<double> sorted_values() const {
    std::vector<double> v;
    v.reserve(2 * segs_.size());
    v.insert(v.end(), vmin_.begin(), vmin_.end());
    v.insert(v.end(), vmax_.begin(), vmax_.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

private:
  double log_base_;
  std::span<const ExpSegment> segs_;
  std::vector<double> vmin_;
  std::vector<double> vmax_;
};

// Solves measure(c) = 1/2 on the open bracket (lo, hi), which contains no
// piece endpoint value, so the measure is continuous and strictly increasing
// there. Returns inf{c : measure >= 1/2} when lower is set, otherwise
// sup{c : measure <= 1/2}.
double solve_bracket(const LevelTable& table, double lo, double hi, bool lower) {
  CompensatedSum base;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& s = table.segment(i);
    if (table.vmax(i) <= lo)
      base += s.hi - s.lo;
    else if (!s.is_constant() && table.vmin(i) <= lo && table.vmax(i) >= hi)
      active.push_back(i);
  }
  if (active.empty()) return lower ? hi : lo;

  if (active.size() == 1) {
    const auto& s = table.segment(active.front());
    const double need = kHalf - base.value();
    const double t = std::clamp(s.a > 0.0 ? s.lo + need : s.hi - need, s.lo, s.hi);
    return std::clamp(s.value(table.log_base(), t), lo, hi);
  }

  // Several pieces cross the bracket: the level equation is a sum of
  // logarithms with no closed form, so bisect to the last representable c.
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    CompensatedSum f(base.value());
    for (auto i : active) f += table.crossing_measure(table.segment(i), mid);
    const double m = f.value();
    if (lower)
      (m >= kHalf ? hi : lo) = mid;
    else
      (m <= kHalf ? lo : hi) = mid;
  }
  return lower ? hi : lo;
}

OffsetInterval median_of(const LevelTable& table) {
  const auto values = table.sorted_values();
  const std::size_t last = values.size() - 1;

  // First value with measure >= 1/2.
  const auto k_it = std::partition_point(values.begin(), values.end(),
                                         [&](double v) { return table.measure(v) < kHalf; });
  const std::size_t k = k_it == values.end() ? last : static_cast<std::size_t>(k_it - values.begin());
  double c_lo;
  if (k == 0 || table.measure(values[k], true) < kHalf)
    c_lo = values[k];
  else
    c_lo = solve_bracket(table, values[k - 1], values[k], true);

  // Last value with strict measure <= 1/2.
  const auto j_it = std::partition_point(values.begin(), values.end(),
                                         [&](double v) { return table.measure(v, true) <= kHalf; });
  const std::size_t j = j_it == values.begin() ? 0 : static_cast<std::size_t>(j_it - values.begin()) - 1;
  double c_hi;
  if (j == last || table.measure(values[j]) > kHalf)
    c_hi = values[j];
  else
    c_hi = solve_bracket(table, values[j], values[j + 1], false);

  return {c_lo, std::max(c_lo, c_hi)};
}

// First s in [0,1) where delta(s) or delta(s-) equals c.
void locate_cut(const LevelTable& table, double c, TransportResult& out) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (c < table.vmin(i) || c > table.vmax(i)) continue;
    const auto& s = table.segment(i);
    const double at_lo = s.at_lo(table.log_base());
    if (s.is_constant() || c == at_lo) {
      out.cut = s.lo;
      out.cut_variant = CutVariant::D;
      return;
    }
    const double t = std::log((c - s.b) / s.a) / table.log_base();
    if (t < s.hi && c != s.at_hi(table.log_base())) {
      out.cut = std::max(t, s.lo);
      out.cut_variant = CutVariant::D;
    } else {
      // Attained only as the left limit at hi; the limit at 1 is read at 0.
      out.cut = s.hi < 1.0 ? s.hi : 0.0;
      out.cut_variant = CutVariant::I;
    }
    return;
  }
}

}  // namespace

double integral_abs(const DeltaProfile& delta, double c) {
  const double lb = delta.log_base();
  CompensatedSum sum;
  for (const auto& s : delta.segments()) {
    if (s.a != 0.0) {
      const double r = (c - s.b) / s.a;
      if (r > 0.0) {
        const double t = std::log(r) / lb;
        if (t > s.lo && t < s.hi) {
          sum += std::abs(piece_integral(s, lb, c, s.lo, t));
          sum += std::abs(piece_integral(s, lb, c, t, s.hi));
          continue;
        }
      }
    }
    sum += std::abs(piece_integral(s, lb, c, s.lo, s.hi));
  }
  return sum.value();
}

double level_measure(const DeltaProfile& delta, double c) {
  return std::clamp(LevelTable(delta).measure(c), 0.0, 1.0);
}

OffsetInterval median_offset(const DeltaProfile& delta) { return median_of(LevelTable(delta)); }

TransportResult w1_line(const DeltaProfile& delta) {
  TransportResult r;
  r.distance = integral_abs(delta, 0.0);
  r.pieces = delta.size();
  return r;
}

TransportResult w1_line(const PiecewiseCdf& F, const PiecewiseCdf& G) { return w1_line(delta_profile(F, G)); }

TransportResult w1_circle(const DeltaProfile& delta) {
  const LevelTable table(delta);
  const auto interval = median_of(table);
  TransportResult r;
  r.offset = interval.lo;
  r.offset_lo = interval.lo;
  r.offset_hi = interval.hi;
  r.distance = integral_abs(delta, r.offset);
  r.pieces = delta.size();
  locate_cut(table, r.offset, r);
  return r;
}

TransportResult w1_circle(const PiecewiseCdf& F, const PiecewiseCdf& G) { return w1_circle(delta_profile(F, G)); }

double cut_distance(const PiecewiseCdf& F, const PiecewiseCdf& G, double s, CutVariant variant) {
  const Side side = variant == CutVariant::D ? Side::right : Side::left;
  const double c = eval_cdf(F, s, side) - eval_cdf(G, s, side);
  return integral_abs(delta_profile(F, G), c);
}

}  // namespace circw1
