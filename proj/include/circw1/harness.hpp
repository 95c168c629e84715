#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace circw1 {

enum class Metric { line, circle, both };

struct SweepConfig {
  int base = 10;
  std::uint64_t n_min = 100;
  std::uint64_t n_max = 1'000'000;
  int points_per_decade = 4;
  Metric metrics = Metric::both;
  std::string output;  // empty: no file
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

// One sweep record. Distances compare nu_N with the exponential law rotated
// by <-log_b N>; every "log" in the scaled columns is the natural logarithm.
// Columns that were not requested hold NaN.
struct MetricsRow {
  int base = 0;
  std::uint64_t N = 0;
  int n = 0;
  double d_line = 0.0;
  double d_circle = 0.0;
  double offset_c = 0.0;
  double scaled_line = 0.0;           // N d_line / ln N
  double scaled_circle_sqrt = 0.0;    // N d_circle / sqrt(ln N)
  double scaled_circle_linear = 0.0;  // N d_circle
  double wall_time_seconds = 0.0;
};

// Extrapolation model r(N) = intercept + slope / ln N.
struct RateFit {
  double intercept = 0.0;
  double slope = 0.0;
  double residual_max = 0.0;
};

enum class ScaledColumn { scaled_line, scaled_circle_sqrt };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MetricsRow compute_metrics(int b, std::uint64_t N, Metric metrics = Metric::both);

// round(10^(k/P)) clipped to [max(n_min, base), n_max], ascending, unique.
std::vector<std::uint64_t> sweep_grid(const SweepConfig& cfg);

// Rows in ascending N whatever the thread count; writes cfg.output when set.
std::vector<MetricsRow> run_sweep(const SweepConfig& cfg);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_csv(std::istream& in);

RateFit fit_rate(const std::vector<MetricsRow>& rows, ScaledColumn column);

// Reference constants.
double sharp_line_limit(int b);                  // 1/(2 ln b)
inline constexpr double kCircleBoundBase10 = 0.259958;  // (1/ln 10) sqrt(33/(40 ln 10))
inline constexpr double kCircleBoundSlack = 1.5;
inline constexpr double kLineLimitTolerance = 0.02;
inline constexpr double kLinearFloor = 0.01;
inline constexpr std::uint64_t kMinVerifyRange = 1000;

enum class Verdict { pass, warn, fail, info };
const char* to_string(Verdict v);

struct CriterionResult {
  std::string name;
  Verdict verdict;
  std::string detail;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  int exit_code = 0;  // 0 all hard criteria pass, 1 some fail, 2 unusable grid
};

// Rate criteria over sweep rows for base b (rows must span N >= 10^3).
std::vector<CriterionResult> evaluate_rate_criteria(int b, const std::vector<MetricsRow>& rows);

VerifyReport verify(const SweepConfig& cfg);

void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace circw1
