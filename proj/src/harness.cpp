#include "circw1/harness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "circw1/logb_sequence.hpp"
#include "circw1/measure.hpp"
#include "circw1/transport.hpp"

namespace circw1 {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int decade_of(std::uint64_t N) {
  int d = 0;
  for (; N >= 10; N /= 10) ++d;
  return d;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Median of f(row) per base-10 decade of N, in ascending decade order.
template <class F>
std::vector<double> decade_medians(const std::vector<MetricsRow>& rows, F f) {
  std::map<int, std::vector<double>> groups;
  for (const auto& r : rows) groups[decade_of(r.N)].push_back(f(r));
  std::vector<double> out;
  for (auto& [d, v] : groups) out.push_back(median(std::move(v)));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  return out;
}

template <class T>
T parse_field(const std::string& s) {
  T v{};
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw std::domain_error("malformed CSV field '" + s + "'");
  return v;
}

}  // namespace

const char* const kCsvHeader =
    "base,N,n,d_line,d_circle,offset_c,scaled_line,scaled_circle_sqrt,scaled_circle_linear,wall_time_seconds";

void SweepConfig::validate() const {
  if (base < 2) throw std::domain_error("base must be >= 2");
  if (n_min < 1 || n_min > n_max) throw std::domain_error("need 1 <= n_min <= n_max");
  if (points_per_decade < 1) throw std::domain_error("points_per_decade must be >= 1");
}

MetricsRow compute_metrics(int b, std::uint64_t N, Metric metrics) {
  if (b < 2) throw std::domain_error("base must be >= 2");
  if (N < static_cast<std::uint64_t>(b)) throw std::domain_error("N must be at least the base");
  if (N > kMaxCount) throw std::domain_error("N exceeds the supported maximum " + std::to_string(kMaxCount));

  const auto start = std::chrono::steady_clock::now();
  MetricsRow row;
  row.base = b;
  row.N = N;
  row.n = digit_count(b, N);

  const auto delta = delta_profile(closed_form_cdf(b, N), cdf_wrapped_exponential(b, reference_rotation(b, N)));
  const double n_real = static_cast<double>(N);
  const double ln_n = std::log(n_real);

  row.d_line = kNaN;
  row.scaled_line = kNaN;
  if (metrics != Metric::circle) {
    row.d_line = w1_line(delta).distance;
    row.scaled_line = n_real * row.d_line / ln_n;
  }
  row.d_circle = row.offset_c = row.scaled_circle_sqrt = row.scaled_circle_linear = kNaN;
  if (metrics != Metric::line) {
    const auto circle = w1_circle(delta);
    row.d_circle = circle.distance;
    row.offset_c = circle.offset;
    row.scaled_circle_sqrt = n_real * row.d_circle / std::sqrt(ln_n);
    row.scaled_circle_linear = n_real * row.d_circle;
  }
  row.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<std::uint64_t> sweep_grid(const SweepConfig& cfg) {
  cfg.validate();
  const std::uint64_t lo = std::max<std::uint64_t>(cfg.n_min, static_cast<std::uint64_t>(cfg.base));
  const double p = cfg.points_per_decade;
  const auto k0 = static_cast<long>(std::floor(p * std::log10(static_cast<double>(lo)))) - 1;
  const auto k1 = static_cast<long>(std::ceil(p * std::log10(static_cast<double>(cfg.n_max)))) + 1;
  std::vector<std::uint64_t> grid;
  for (long k = std::max(0L, k0); k <= k1; ++k) {
    const auto N = static_cast<std::uint64_t>(std::llround(std::pow(10.0, static_cast<double>(k) / p)));
    if (N >= lo && N <= cfg.n_max) grid.push_back(N);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<MetricsRow> run_sweep(const SweepConfig& cfg) {
  const auto grid = sweep_grid(cfg);

  // Open the output first so that a bad path fails before the work.
  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + cfg.output + "' for writing");
  }

  std::vector<MetricsRow> rows(grid.size());
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, grid.size())));
  // Largest N first keeps the workers balanced.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < grid.size();) {
      const std::size_t i = grid.size() - 1 - k;
      rows[i] = compute_metrics(cfg.base, grid[i], cfg.metrics);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (file.is_open()) {
    write_csv(file, rows);
    file.flush();
    if (!file) throw IoError("failed writing '" + cfg.output + "'");
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.base << ',' << r.N << ',' << r.n << ',' << fmt17(r.d_line) << ',' << fmt17(r.d_circle) << ','
        << fmt17(r.offset_c) << ',' << fmt17(r.scaled_line) << ',' << fmt17(r.scaled_circle_sqrt) << ','
        << fmt17(r.scaled_circle_linear) << ',' << fmt17(r.wall_time_seconds) << '\n';
  }
}

std::vector<MetricsRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::domain_error("missing or unexpected CSV header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) throw std::domain_error("CSV row has " + std::to_string(f.size()) + " fields, expected 10");
    MetricsRow r;
    r.base = parse_field<int>(f[0]);
    r.N = parse_field<std::uint64_t>(f[1]);
    r.n = parse_field<int>(f[2]);
    r.d_line = parse_field<double>(f[3]);
    r.d_circle = parse_field<double>(f[4]);
    r.offset_c = parse_field<double>(f[5]);
    r.scaled_line = parse_field<double>(f[6]);
    r.scaled_circle_sqrt = parse_field<double>(f[7]);
    r.scaled_circle_linear = parse_field<double>(f[8]);
    r.wall_time_seconds = parse_field<double>(f[9]);
    rows.push_back(r);
  }
  return rows;
}

RateFit fit_rate(const std::vector<MetricsRow>& rows, ScaledColumn column) {
  std::vector<std::uint64_t> ns;
  for (const auto& r : rows) ns.push_back(r.N);
  std::sort(ns.begin(), ns.end());
  if (std::unique(ns.begin(), ns.end()) - ns.begin() < 3) throw std::domain_error("rate fit needs at least 3 distinct N");

  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    if (r.N < 2) throw std::domain_error("rate fit needs N >= 2");
    design(i, 0) = 1.0;
    design(i, 1) = 1.0 / std::log(static_cast<double>(r.N));
    target(i) = column == ScaledColumn::scaled_line ? r.scaled_line : r.scaled_circle_sqrt;
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
  RateFit fit{coef(0), coef(1), (design * coef - target).cwiseAbs().maxCoeff()};
  return fit;
}

double sharp_line_limit(int b) { return 1.0 / (2.0 * std::log(static_cast<double>(b))); }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::warn: return "WARN";
    case Verdict::fail: return "FAIL";
    case Verdict::info: return "INFO";
  }
  return "?";
}

std::vector<CriterionResult> evaluate_rate_criteria(int b, const std::vector<MetricsRow>& rows) {
  std::vector<CriterionResult> out;
  std::vector<MetricsRow> range;
  for (const auto& r : rows)
    if (r.N >= kMinVerifyRange) range.push_back(r);
  const auto hard = [](bool ok) { return ok ? Verdict::pass : Verdict::fail; };
  std::ostringstream os;
  os.precision(7);

  // Structural: distances are non-negative and the circle never loses.
  {
    bool ok = true;
    for (const auto& r : rows)
      ok = ok && r.d_line >= 0.0 && r.d_circle >= 0.0 && r.d_circle <= r.d_line && r.d_circle <= 0.5;
    out.push_back({"domination and positivity", hard(ok), "0 <= d_circle <= min(d_line, 1/2) on " + std::to_string(rows.size()) + " rows"});
  }

  if (range.size() < 3) {
    out.push_back({"line sharp rate", Verdict::fail, "fewer than 3 grid points with N >= 1000"});
    return out;
  }

  const double limit = sharp_line_limit(b);
  {
    const auto fit = fit_rate(range, ScaledColumn::scaled_line);
    os.str("");
    os << "fitted limit " << fit.intercept << " vs 1/(2 ln " << b << ") = " << limit << ", slope " << fit.slope
       << ", |diff| " << std::abs(fit.intercept - limit) << " (tol " << kLineLimitTolerance << ")";
    out.push_back({"line sharp rate: fitted limit", hard(std::abs(fit.intercept - limit) <= kLineLimitTolerance), os.str()});

    const auto med = decade_medians(range, [&](const MetricsRow& r) { return std::abs(r.scaled_line - limit); });
    bool mono = true;
    for (std::size_t i = 1; i < med.size(); ++i) mono = mono && med[i] <= med[i - 1];
    out.push_back({"line sharp rate: decade medians of |scaled_line - limit| non-increasing", hard(mono), "[" + join(med) + "]"});
  }

  {
    double worst = 0.0;
    for (const auto& r : range)
      if (r.N >= 10'000) worst = std::max(worst, r.scaled_circle_sqrt);
    os.str("");
    os << "max N d_circle / sqrt(ln N) over N >= 1e4 = " << worst;
    if (b == 10) {
      const Verdict v = worst <= kCircleBoundBase10 ? Verdict::pass
                        : worst <= kCircleBoundBase10 * kCircleBoundSlack ? Verdict::warn
                                                                          : Verdict::fail;
      os << " (bound " << kCircleBoundBase10 << ", slack x" << kCircleBoundSlack << ")";
      out.push_back({"circle bound", v, os.str()});
    } else {
      os << " (bound constant is stated for base 10 only)";
      out.push_back({"circle bound", Verdict::info, os.str()});
    }
  }

  {
    double floor_seen = std::numeric_limits<double>::infinity();
    for (const auto& r : range) floor_seen = std::min(floor_seen, r.scaled_circle_linear);
    os.str("");
    os << "min N d_circle = " << floor_seen << " (floor " << kLinearFloor << ")";
    out.push_back({"not faster than 1/N", b == 10 ? hard(floor_seen >= kLinearFloor) : Verdict::info, os.str()});
  }

  {
    bool beats = true;
    for (const auto& r : range) beats = beats && r.d_circle < r.d_line;
    out.push_back({"circle beats line: d_circle < d_line for every N >= 1e3", hard(beats), ""});
    const auto ratio = decade_medians(range, [](const MetricsRow& r) { return r.d_circle / r.d_line; });
    bool dec = true;
    for (std::size_t i = 1; i < ratio.size(); ++i) dec = dec && ratio[i] < ratio[i - 1];
    out.push_back({"circle beats line: decade medians of d_circle/d_line decreasing",
                   b == 10 ? hard(dec) : (dec ? Verdict::pass : Verdict::info), "[" + join(ratio) + "]"});
  }

  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : range) {
      lo = std::min(lo, r.scaled_circle_sqrt);
      hi = std::max(hi, r.scaled_circle_sqrt);
    }
    os.str("");
    os << "observed N d_circle / sqrt(ln N) in [" << lo << ", " << hi << "]";
    out.push_back({"conjectured sqrt(log N)/N order", Verdict::info, os.str()});
  }
  return out;
}

VerifyReport verify(const SweepConfig& cfg) {
  VerifyReport report;
  if (cfg.n_max < kMinVerifyRange) {
    report.criteria.push_back({"grid range", Verdict::fail, "insufficient range: n_max must be at least 1000"});
    report.exit_code = 2;
    return report;
  }
  SweepConfig c = cfg;
  c.metrics = Metric::both;
  report.criteria = evaluate_rate_criteria(cfg.base, run_sweep(c));

  // N d_line = n/2 + g(<log_b N>) with g periodic, so between two powers of
  // the base the log-slope of N d_line isolates the limit constant.
  const auto b = static_cast<std::uint64_t>(cfg.base);
  std::uint64_t lo_pow = 1;
  while (lo_pow < std::max(cfg.n_min, kMinVerifyRange) && lo_pow <= kMaxCount / b) lo_pow *= b;
  std::uint64_t hi_pow = lo_pow;
  while (hi_pow <= cfg.n_max / b) hi_pow *= b;
  if (hi_pow > lo_pow && lo_pow <= cfg.n_max) {
    const auto lo_row = compute_metrics(cfg.base, lo_pow, Metric::line);
    const auto hi_row = compute_metrics(cfg.base, hi_pow, Metric::line);
    const double slope = (static_cast<double>(hi_pow) * hi_row.d_line - static_cast<double>(lo_pow) * lo_row.d_line) /
                         std::log(static_cast<double>(hi_pow) / static_cast<double>(lo_pow));
    std::ostringstream os;
    os.precision(7);
    os << "slope of N d_line vs ln N between N = " << lo_pow << " and " << hi_pow << ": " << slope
       << " vs 1/(2 ln " << cfg.base << ") = " << sharp_line_limit(cfg.base);
    report.criteria.push_back({"line sharp rate: power-of-base slope", Verdict::info, os.str()});
  }

  report.exit_code = std::any_of(report.criteria.begin(), report.criteria.end(),
                                 [](const CriterionResult& r) { return r.verdict == Verdict::fail; })
                         ? 1
                         : 0;
  return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
  for (const auto& c : report.criteria) {
    out << to_string(c.verdict) << "  " << c.name;
    if (!c.detail.empty()) out << "  -- " << c.detail;
    out << '\n';
  }
}

}  // namespace circw1
