#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vislat/numtheory.hpp"
#include "vislat/stats.hpp"
#include "vislat/walk.hpp"

namespace vislat {

struct McOptions {
  std::uint64_t steps = 1;    // n; each path simulates n+1 steps
  std::uint64_t paths = 1;    // path p uses stream p of cfg.seed
  std::uint64_t modulus = 1;  // 1 disables residue rows
  unsigned parallelism = 1;   // worker threads; 0 = hardware concurrency
  double theory_tol = 1e-12;
};

/// One pooled statistic: the row carries pooled counts, `mean` and `stddev`
/// are over per-path proportions (sample stddev, 0 for a single path).
struct SummaryRow {
  ReportRow row;
  double mean = 0.0;
  double stddev = 0.0;
};

struct McResult {
  McOptions options;
  std::uint64_t seed = 0;
  nt::TheoryConstants theory;
  std::vector<WindowCounts> per_path_counts;
  std::vector<Report> per_path;
  WindowCounts pooled;
  std::vector<SummaryRow> summary;

  /// Summary rows as a Report (the CSV form of a run).
  [[nodiscard]] Report summary_report() const;
};

/// Runs `paths` independent walks of n+1 steps and reduces their counters.
/// The result depends only on (cfg, steps, paths, modulus), never on parallelism.
McResult mc_run(const WalkConfig& cfg, const McOptions& options);

/// Simulates one path and returns its accumulator over [1, n+1].
VisAccumulator simulate_path(const WalkConfig& cfg, std::uint64_t stream, std::uint64_t steps, std::uint64_t modulus);

struct Check {
  ReportRow row;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// |mean - theory| <= tolerance for every summary row with a theory value.
std::vector<Check> check_against_theory(const McResult& result, double tolerance);

struct SweepPoint {
  std::uint64_t n = 0;
  double mean = 0.0;
  double abs_error = 0.0;
  double stddev = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<double> stddev_slope;  // least-squares slope of log(stddev) on log(n); needs >= 3 points
  std::optional<double> error_slope;
};

/// Mean visible proportion and cross-path spread for each n in an ascending grid.
SweepResult convergence_sweep(const WalkConfig& cfg, const std::vector<std::uint64_t>& n_grid, std::uint64_t paths,
                              std::uint64_t modulus = 1, unsigned parallelism = 1);

/// Least-squares slope of log(y) against log(x); nullopt with fewer than 3 usable points.
std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vislat
