#include "circw1/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "circw1/compensated_sum.hpp"

namespace circw1::oracle {
namespace {

struct Mass {
  double x;
  double w;
};

std::vector<Mass> sorted_masses(const std::vector<double>& pos, const std::vector<double>& w) {
  if (pos.size() != w.size()) throw std::domain_error("positions and weights differ in length");
  if (pos.empty()) throw std::domain_error("atom list is empty");
  std::vector<Mass> m(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (!(w[i] > 0.0)) throw std::domain_error("atom weights must be positive");
    m[i] = {pos[i], w[i]};
  }
  std::sort(m.begin(), m.end(), [](const Mass& l, const Mass& r) { return l.x < r.x; });
  return m;
}

std::vector<double> cumulative(const std::vector<Mass>& m) {
  std::vector<double> c(m.size());
  CompensatedSum s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += m[i].w;
    c[i] = s.value();
  }
  c.back() = 1.0;
  return c;
}

double total_weight(const std::vector<double>& w) {
  CompensatedSum s;
  for (double x : w) s += x;
  return s.value();
}

// Positions may include 1 here: a cut-open circle lives on [0,1].
double monotone_coupling_cost(const std::vector<Mass>& a, const std::vector<Mass>& b) {
  const auto ca = cumulative(a);
  const auto cb = cumulative(b);
  CompensatedSum cost;
  double prev = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double next = std::min(ca[i], cb[j]);
    cost += (next - prev) * std::abs(a[i].x - b[j].x);
    prev = next;
    if (ca[i] == next) ++i;
    if (cb[j] == next) ++j;
  }
  return cost.value();
}

void check_mass(const AtomList& a, const AtomList& b) {
  const double ta = total_weight(a.weights);
  const double tb = total_weight(b.weights);
  if (std::abs(ta - 1.0) > 1e-12 || std::abs(tb - 1.0) > 1e-12)
    throw std::domain_error("atom weights must sum to 1 (got " + std::to_string(ta) + " and " + std::to_string(tb) + ")");
}

std::vector<Mass> cut_open(const AtomList& a, double s, CutVariant variant) {
  std::vector<double> pos(a.positions.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double x = a.positions[i];
    if (x > s)
      pos[i] = x - s;
    else if (x < s)
      pos[i] = x + (1.0 - s);
    else
      pos[i] = variant == CutVariant::D ? 1.0 : 0.0;
  }
  return sorted_masses(pos, a.weights);
}

}  // namespace

AtomList AtomList::equal_weights(std::vector<double> positions) {
  const double w = 1.0 / static_cast<double>(positions.size());
  std::vector<double> weights(positions.size(), w);
  return {std::move(positions), std::move(weights)};
}

double discrete_w1_line(const AtomList& a, const AtomList& b) {
  check_mass(a, b);
  return monotone_coupling_cost(sorted_masses(a.positions, a.weights), sorted_masses(b.positions, b.weights));
}

double discrete_w1_circle(const AtomList& a, const AtomList& b) {
  check_mass(a, b);
  if (a.size() + b.size() > kBruteForceCap)
    throw std::domain_error("brute-force circle transport is capped at " + std::to_string(kBruteForceCap) + " atoms");
  std::vector<double> cuts = a.positions;
  cuts.insert(cuts.end(), b.positions.begin(), b.positions.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double best = std::numeric_limits<double>::infinity();
  for (double s : cuts)
    for (auto v : {CutVariant::D, CutVariant::I})
      best = std::min(best, monotone_coupling_cost(cut_open(a, s, v), cut_open(b, s, v)));
  return best;
}

double cdf_inverse(const PiecewiseCdf& F, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("quantile level must lie in (0,1]");
  const double lb = F.log_base();
  const double below_one = std::nextafter(1.0, 0.0);
  for (const auto& s : F.segments()) {
    if (s.at_lo(lb) >= u) return s.lo;
    if (!s.is_constant() && s.at_hi(lb) > u) {
      const double t = std::log((u - s.b) / s.a) / lb;
      return std::clamp(t, s.lo, std::min(s.hi, below_one));
    }
  }
  return below_one;
}

AtomList quantile_discretize(const std::function<double(double)>& inverse_cdf, std::size_t m) {
  if (m == 0) throw std::domain_error("need at least one quantile atom");
  std::vector<double> pos(m);
  for (std::size_t k = 0; k < m; ++k) pos[k] = inverse_cdf((static_cast<double>(k) + 0.5) / static_cast<double>(m));
  return AtomList::equal_weights(std::move(pos));
}

AtomList quantile_discretize(const PiecewiseCdf& F, std::size_t m) {
  return quantile_discretize([&F](double u) { return cdf_inverse(F, u); }, m);
}

GridMinimum grid_minimize_offset(const DeltaProfile& delta, std::size_t grid_points) {
  if (grid_points < 2) throw std::domain_error("offset grid needs at least two points");
  const double lo = delta.min_value();
  const double hi = delta.max_value();
  GridMinimum best{lo, integral_abs(delta, lo)};
  if (hi == lo) return best;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  for (std::size_t k = 1; k < grid_points; ++k) {
    const double c = k + 1 == grid_points ? hi : lo + step * static_cast<double>(k);
    const double v = integral_abs(delta, c);
    if (v < best.value) best = {c, v};
  }
  return best;
}

PiecewiseCdf step_cdf(const AtomList& atoms, int base) {
  const auto m = sorted_masses(atoms.positions, atoms.weights);
  for (const auto& a : m)
    if (!(a.x >= 0.0 && a.x < 1.0)) throw std::domain_error("atom position outside [0,1)");
  const auto c = cumulative(m);
  std::vector<CdfSegment> segs;
  segs.reserve(m.size() + 1);
  if (m.front().x > 0.0) segs.push_back({0.0, m.front().x, 0.0, 0.0});
  for (std::size_t i = 0; i < m.size();) {
    const double x = m[i].x;
    while (i < m.size() && m[i].x == x) ++i;
    segs.push_back({x, i < m.size() ? m[i].x : 1.0, 0.0, c[i - 1]});
  }
  return PiecewiseCdf(base, std::move(segs));
}

AtomList random_atoms(std::mt19937_64& rng, std::size_t max_atoms) {
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, max_atoms));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> lattice(0, 15);
  const bool coarse = std::bernoulli_distribution(0.5)(rng);
  std::vector<double> pos(count(rng));
  for (auto& x : pos) x = coarse ? lattice(rng) / 16.0 : unit(rng);
  return AtomList::equal_weights(std::move(pos));
}

OracleCheckReport run_oracle_check(std::size_t trials, std::size_t max_atoms, std::uint64_t seed, double tolerance) {
  std::mt19937_64 rng(seed);
  OracleCheckReport report;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto a = random_atoms(rng, max_atoms);
    const auto b = random_atoms(rng, max_atoms);
    const auto fa = step_cdf(a);
    const auto fb = step_cdf(b);
    const double line_err = std::abs(w1_line(fa, fb).distance - discrete_w1_line(a, b));
    const double circle_err = std::abs(w1_circle(fa, fb).distance - discrete_w1_circle(a, b));
    report.max_line_error = std::max(report.max_line_error, line_err);
    report.max_circle_error = std::max(report.max_circle_error, circle_err);
    if (line_err > tolerance || circle_err > tolerance) ++report.failures;
    ++report.trials;
  }
  return report;
}

}  // namespace circw1::oracle
