#include "circw1/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "circw1/compensated_sum.hpp"

namespace circw1 {
namespace {

constexpr double kValueTolerance = 1e-9;

void check_base(int base) {
  if (base < 2) throw std::domain_error("base must be an integer >= 2, got " + std::to_string(base));
}

void check_unit(double t, const char* what) {
  if (!(t >= 0.0 && t < 1.0)) throw std::domain_error(std::string(what) + " must lie in [0,1), got " + std::to_string(t));
}

// Drops empty pieces and verifies that the rest tile [0,1) exactly.
std::vector<ExpSegment> tidy_cover(std::vector<ExpSegment> segs) {
  std::vector<ExpSegment> out;
  out.reserve(segs.size());
  for (const auto& s : segs) {
    if (!(s.lo <= s.hi)) throw std::domain_error("segment with lo > hi");
    if (s.lo < s.hi) out.push_back(s);
  }
  if (out.empty()) throw std::domain_error("no segments");
  if (out.front().lo != 0.0) throw std::domain_error("segments must start at 0");
  if (out.back().hi != 1.0) throw std::domain_error("segments must end at 1");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].lo != out[i - 1].hi) throw std::domain_error("segments leave a gap or overlap");
  return out;
}

template <class Segments>
std::size_t locate_in(const Segments& segs, double t) {
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double v, const ExpSegment& s) { return v < s.lo; });
  return it == segs.begin() ? 0 : static_cast<std::size_t>(it - segs.begin()) - 1;
}

template <class Segments>
double eval_piecewise(const Segments& segs, double log_base, double t, Side side) {
  const std::size_t i = locate_in(segs, t);
  if (side == Side::left && t == segs[i].lo) return i == 0 ? 0.0 : segs[i - 1].at_hi(log_base);
  return segs[i].value(log_base, t);
}

struct Atom {
  double position;
  double mass;
};

}  // namespace

double ExpSegment::value(double log_base, double t) const {
  return a == 0.0 ? b : a * std::exp(log_base * t) + b;
}

PiecewiseCdf::PiecewiseCdf(int base, std::vector<CdfSegment> segments) : base_(base) {
  check_base(base);
  log_base_ = std::log(static_cast<double>(base));
  auto segs = tidy_cover(std::move(segments));

  std::vector<CdfSegment> merged;
  merged.reserve(segs.size());
  for (const auto& s : segs) {
    if (s.a < 0.0) throw std::domain_error("CDF segment must be non-decreasing");
    if (!merged.empty() && merged.back().a == s.a && merged.back().b == s.b)
      merged.back().hi = s.hi;
    else
      merged.push_back(s);
  }

  double prev = 0.0;
  for (const auto& s : merged) {
    const double v0 = s.at_lo(log_base_);
    const double v1 = s.at_hi(log_base_);
    if (v0 < -kValueTolerance || v1 > 1.0 + kValueTolerance) throw std::domain_error("CDF value outside [0,1]");
    if (v0 < prev - kValueTolerance) throw std::domain_error("CDF decreases across a breakpoint");
    prev = v1;
  }
  if (std::abs(prev - 1.0) > kValueTolerance) throw std::domain_error("CDF left limit at 1 must equal 1");
  segments_ = std::move(merged);
}

bool PiecewiseCdf::is_step() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const CdfSegment& s) { return s.is_constant(); });
}

std::size_t PiecewiseCdf::locate(double t) const { return locate_in(segments_, t); }

DeltaProfile::DeltaProfile(int base, std::vector<ExpSegment> segments) : base_(base) {
  check_base(base);
  log_base_ = std::log(static_cast<double>(base));
  segments_ = tidy_cover(std::move(segments));
  for (const auto& s : segments_) {
    if (std::abs(s.at_lo(log_base_)) > 1.0 + kValueTolerance || std::abs(s.at_hi(log_base_)) > 1.0 + kValueTolerance)
      throw std::domain_error("profile value outside [-1,1]");
  }
}

std::size_t DeltaProfile::locate(double t) const { return locate_in(segments_, t); }

double DeltaProfile::min_value() const {
  double m = segments_.front().at_lo(log_base_);
  for (const auto& s : segments_) m = std::min({m, s.at_lo(log_base_), s.at_hi(log_base_)});
  return m;
}

double DeltaProfile::max_value() const {
  double m = segments_.front().at_lo(log_base_);
  for (const auto& s : segments_) m = std::max({m, s.at_lo(log_base_), s.at_hi(log_base_)});
  return m;
}

CircleEmpirical build_empirical(std::span<const double> positions, int base) {
  check_base(base);
  if (positions.empty()) throw std::domain_error("empirical measure needs at least one atom");
  CircleEmpirical m{base, {positions.begin(), positions.end()}};
  for (double x : m.atoms) check_unit(x, "atom position");
  std::sort(m.atoms.begin(), m.atoms.end());
  for (std::size_t i = 1; i < m.atoms.size(); ++i)
    if (m.atoms[i] - m.atoms[i - 1] <= kAtomMergeTolerance) m.atoms[i] = m.atoms[i - 1];
  return m;
}

PiecewiseCdf cdf_of_empirical(const CircleEmpirical& m) {
  if (m.atoms.empty()) throw std::domain_error("empirical measure needs at least one atom");
  const auto n = m.atoms.size();
  std::vector<CdfSegment> segs;
  segs.reserve(n + 1);
  if (m.atoms.front() > 0.0) segs.push_back({0.0, m.atoms.front(), 0.0, 0.0});
  for (std::size_t i = 0; i < n;) {
    const double x = m.atoms[i];
    while (i < n && m.atoms[i] == x) ++i;
    const double next = i < n ? m.atoms[i] : 1.0;
    // Levels are ratios of exact integers, so each is correctly rounded.
    segs.push_back({x, next, 0.0, static_cast<double>(i) / static_cast<double>(n)});
  }
  return PiecewiseCdf(m.base, std::move(segs));
}

PiecewiseCdf cdf_wrapped_exponential(int b, double y) {
  check_base(b);
  check_unit(y, "rotation");
  const double bm1 = static_cast<double>(b) - 1.0;
  if (y == 0.0) return PiecewiseCdf(b, {{0.0, 1.0, 1.0 / bm1, -1.0 / bm1}});
  const double by = std::pow(static_cast<double>(b), y);
  const double cut = 1.0 - y;
  return PiecewiseCdf(b, {{0.0, cut, by / bm1, -by / bm1},
                          {cut, 1.0, by / (static_cast<double>(b) * bm1), 1.0 - by / bm1}});
}

double eval_cdf(const PiecewiseCdf& F, double t, Side side) {
  check_unit(t, "evaluation point");
  return eval_piecewise(F.segments(), F.log_base(), t, side);
}

double eval_delta(const DeltaProfile& d, double t, Side side) {
  check_unit(t, "evaluation point");
  return eval_piecewise(d.segments(), d.log_base(), t, side);
}

PiecewiseCdf rotate_cdf(const PiecewiseCdf& F, double y) {
  check_unit(y, "rotation");
  if (y == 0.0) return F;
  const double below_one = std::nextafter(1.0, 0.0);
  const auto segs = F.segments();

  if (F.is_step()) {
    std::vector<Atom> atoms;
    atoms.reserve(segs.size());
    double prev = 0.0;
    for (const auto& s : segs) {
      if (s.b > prev) {
        const double p = s.lo >= y ? s.lo - y : std::min(s.lo - y + 1.0, below_one);
        atoms.push_back({p, s.b - prev});
      }
      prev = s.b;
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.position < r.position; });
    // Cumulative masses; the last level is pinned to 1.
    std::vector<CdfSegment> out;
    out.reserve(atoms.size() + 1);
    if (atoms.empty()) throw std::domain_error("step CDF without atoms");
    if (atoms.front().position > 0.0) out.push_back({0.0, atoms.front().position, 0.0, 0.0});
    CompensatedSum level;
    for (std::size_t i = 0; i < atoms.size();) {
      const double x = atoms[i].position;
      while (i < atoms.size() && atoms[i].position == x) level += atoms[i++].mass;
      const double next = i < atoms.size() ? atoms[i].position : 1.0;
      out.push_back({x, next, 0.0, i == atoms.size() ? 1.0 : std::min(level.value(), 1.0)});
    }
    return PiecewiseCdf(F.base(), std::move(out));
  }

  const double lb = F.log_base();
  const double f_left = eval_cdf(F, y, Side::left);
  const double cut = 1.0 - y;
  const double up = std::exp(lb * y);
  const double down = std::exp(lb * (y - 1.0));
  std::vector<CdfSegment> head;  // from [y, 1)
  std::vector<CdfSegment> tail;  // from [0, y)
  for (const auto& s : segs) {
    if (s.hi <= y) {
      tail.push_back({s.lo + cut, s.hi + cut, s.a * down, s.b + 1.0 - f_left});
    } else if (s.lo >= y) {
      head.push_back({s.lo - y, s.hi - y, s.a * up, s.b - f_left});
    } else {
      tail.push_back({s.lo + cut, cut + y, s.a * down, s.b + 1.0 - f_left});
      head.push_back({0.0, s.hi - y, s.a * up, s.b - f_left});
    }
  }
  if (!tail.empty()) {
    tail.front().lo = cut;
    tail.back().hi = 1.0;
  }
  if (!head.empty()) head.back().hi = tail.empty() ? 1.0 : cut;
  head.insert(head.end(), tail.begin(), tail.end());
  return PiecewiseCdf(F.base(), std::move(head));
}

DeltaProfile delta_profile(const PiecewiseCdf& F, const PiecewiseCdf& G) {
  if (!F.is_step() && !G.is_step() && F.base() != G.base())
    throw std::domain_error("cannot difference exponential pieces with bases " + std::to_string(F.base()) + " and " +
                            std::to_string(G.base()));
  const int base = !F.is_step() ? F.base() : G.base();
  const auto fs = F.segments();
  const auto gs = G.segments();
  std::vector<ExpSegment> out;
  out.reserve(fs.size() + gs.size());
  std::size_t i = 0, j = 0;
  double cur = 0.0;
  while (i < fs.size() && j < gs.size()) {
    const double next = std::min(fs[i].hi, gs[j].hi);
    out.push_back({cur, next, fs[i].a - gs[j].a, fs[i].b - gs[j].b});
    if (fs[i].hi == next) ++i;
    if (gs[j].hi == next) ++j;
    cur = next;
  }
  return DeltaProfile(base, std::move(out));
}

}  // namespace circw1
