// Command-line runner: single distances, N sweeps to CSV, the verification
// report, and the oracle-equivalence check.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "circw1/harness.hpp"
#include "circw1/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_grid_flags(CLI::App* cmd, circw1::SweepConfig& cfg) {
  cmd->add_option("--n-min", cfg.n_min, "smallest N of the grid")->capture_default_str();
  cmd->add_option("--n-max", cfg.n_max, "largest N of the grid")->capture_default_str();
  cmd->add_option("--points-per-decade", cfg.points_per_decade, "grid points per factor of 10")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", cfg.threads, "worker threads (0: all cores)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Kantorovich distances between the fractional parts of log_b n and rotated exponential laws.\n"
               "All scaled statistics use the natural logarithm."};
  app.require_subcommand(1);

  const std::map<std::string, circw1::Metric> metric_names{
      {"line", circw1::Metric::line}, {"circle", circw1::Metric::circle}, {"both", circw1::Metric::both}};

  int dist_base = 10;
  std::uint64_t dist_n = 0;
  circw1::Metric dist_metric = circw1::Metric::both;
  auto* dist = app.add_subcommand("dist", "print one metrics row as key=value lines");
  dist->add_option("--base", dist_base, "integer base b >= 2")->required();
  dist->add_option("--n", dist_n, "number of terms N >= b")->required();
  dist->add_option("--metric", dist_metric, "line, circle or both")
      ->transform(CLI::CheckedTransformer(metric_names, CLI::ignore_case));

  circw1::SweepConfig sweep_cfg;
  auto* sweep = app.add_subcommand("sweep", "write a CSV of metrics over a logarithmic N grid");
  sweep->add_option("--base", sweep_cfg.base, "integer base b >= 2")->required();
  add_grid_flags(sweep, sweep_cfg);
  sweep->add_option("--out", sweep_cfg.output, "CSV output path")->required();

  circw1::SweepConfig verify_cfg;
  verify_cfg.n_min = 1000;
  auto* verify = app.add_subcommand("verify", "sweep and print a PASS/FAIL report for the rate criteria");
  verify->add_option("--base", verify_cfg.base, "integer base b >= 2")->required();
  add_grid_flags(verify, verify_cfg);

  std::size_t trials = 200;
  std::size_t max_atoms = 40;
  std::uint64_t seed = 20240611;
  auto* oracle = app.add_subcommand("oracle-check", "compare the transport engine with brute-force references");
  oracle->add_option("--trials", trials, "random pairs")->capture_default_str();
  oracle->add_option("--max-atoms", max_atoms, "atoms per list at most")->capture_default_str();
  oracle->add_option("--seed", seed, "RNG seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*dist) {
      const auto r = circw1::compute_metrics(dist_base, dist_n, dist_metric);
      std::cout << "base=" << r.base << "\nN=" << r.N << "\nn=" << r.n << '\n';
      if (dist_metric != circw1::Metric::circle)
        std::cout << "d_line=" << fmt17(r.d_line) << "\nscaled_line=" << fmt17(r.scaled_line) << '\n';
      if (dist_metric != circw1::Metric::line)
        std::cout << "d_circle=" << fmt17(r.d_circle) << "\noffset_c=" << fmt17(r.offset_c)
                  << "\nscaled_circle_sqrt=" << fmt17(r.scaled_circle_sqrt)
                  << "\nscaled_circle_linear=" << fmt17(r.scaled_circle_linear) << '\n';
      std::cout << "wall_time_seconds=" << fmt17(r.wall_time_seconds) << '\n';
      return kExitOk;
    }
    if (*sweep) {
      const auto rows = circw1::run_sweep(sweep_cfg);
      std::cerr << "wrote " << rows.size() << " rows to " << sweep_cfg.output << '\n';
      return kExitOk;
    }
    if (*verify) {
      const auto report = circw1::verify(verify_cfg);
      circw1::print_report(std::cout, report);
      return report.exit_code;
    }
    if (*oracle) {
      const auto r = circw1::oracle::run_oracle_check(trials, max_atoms, seed);
      std::cout << "trials=" << r.trials << "\nfailures=" << r.failures << "\nmax_line_error=" << fmt17(r.max_line_error)
                << "\nmax_circle_error=" << fmt17(r.max_circle_error) << '\n'
                << (r.failures == 0 ? "PASS" : "FAIL") << "  oracle equivalence\n";
      return r.failures == 0 ? kExitOk : kExitFail;
    }
  } catch (const circw1::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
