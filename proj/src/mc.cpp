#include "vislat/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "vislat/errors.hpp"

namespace vislat {

VisAccumulator simulate_path(const WalkConfig& cfg, std::uint64_t stream, std::uint64_t steps, std::uint64_t modulus) {
  if (steps == 0) throw DomainError("steps must be >= 1");
  if (steps >= WalkGenerator::kMaxSteps) throw OverflowError("step count exceeds coordinate guard 2^62");
  WalkGenerator walk(cfg, stream);
  VisAccumulator acc(modulus);
  bool prev = false;
  for (std::uint64_t i = 1; i <= steps + 1; ++i) {
    const bool vis = walk.advance();
    acc.record(i, vis, prev);
    prev = vis;
  }
  return acc;
}

Report McResult::summary_report() const {
  Report r;
  for (const auto& s : summary) r.rows.push_back(s.row);
  return r;
}

McResult mc_run(const WalkConfig& raw_cfg, const McOptions& options) {
  if (options.steps == 0) throw DomainError("steps must be >= 1");
  if (options.paths == 0) throw DomainError("paths must be >= 1");
  if (options.modulus == 0) throw DomainError("modulus must be >= 1");
  const WalkConfig cfg = raw_cfg.validated ? raw_cfg : validate_config(raw_cfg);

  McResult result;
  result.options = options;
  result.seed = cfg.seed;
  result.theory = nt::theory_constants(static_cast<int>(cfg.k), options.theory_tol);
  result.per_path_counts.resize(options.paths);

  unsigned workers = options.parallelism == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.parallelism;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, options.paths));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t p = next.fetch_add(1);
      if (p >= options.paths) return;
      try {
        result.per_path_counts[p] = window_counts(simulate_path(cfg, p, options.steps, options.modulus));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = options.paths;
        return;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in path order keeps every derived double identical across worker counts.
  result.pooled = result.per_path_counts.front();
  for (std::uint64_t p = 1; p < options.paths; ++p) result.pooled += result.per_path_counts[p];
  for (const auto& w : result.per_path_counts) result.per_path.push_back(finalize(w, result.theory, cfg.seed));

  const Report pooled = finalize(result.pooled, result.theory, cfg.seed);
  const auto paths = static_cast<double>(options.paths);
  for (std::size_t j = 0; j < pooled.rows.size(); ++j) {
    nt::CompensatedSum sum;
    for (const auto& rep : result.per_path) sum += rep.rows[j].proportion;
    const double mean = sum.value() / paths;
    nt::CompensatedSum sq;
    for (const auto& rep : result.per_path) {
      const double d = rep.rows[j].proportion - mean;
      sq += d * d;
    }
    SummaryRow s{pooled.rows[j], mean, options.paths > 1 ? std::sqrt(sq.value() / (paths - 1.0)) : 0.0};
    if (options.paths > 1) s.row.stderr_ = s.stddev / std::sqrt(paths);
    result.summary.push_back(s);
  }
  return result;
}

std::vector<Check> check_against_theory(const McResult& result, double tolerance) {
  std::vector<Check> out;
  for (const auto& s : result.summary) {
    if (!s.row.theory) continue;
    Check c{s.row, s.mean, *s.row.theory, tolerance, false};
    c.pass = std::fabs(c.value - c.target) <= tolerance;
    out.push_back(c);
  }
  return out;
}

std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("log_log_slope: size mismatch");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0) pts.emplace_back(std::log(x[i]), std::log(y[i]));
  if (pts.size() < 3) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [a, b] : pts) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

SweepResult convergence_sweep(const WalkConfig& cfg, const std::vector<std::uint64_t>& n_grid, std::uint64_t paths,
                              std::uint64_t modulus, unsigned parallelism) {
  if (n_grid.empty()) throw DomainError("convergence_sweep: empty grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end())
    throw DomainError("convergence_sweep: grid must be strictly ascending");
  SweepResult out;
  std::vector<double> xs;
  std::vector<double> sds;
  std::vector<double> errs;
  for (std::uint64_t n : n_grid) {
    const McResult r = mc_run(cfg, {n, paths, modulus, parallelism});
    const SummaryRow& s = r.summary.front();
    out.points.push_back({n, s.mean, std::fabs(s.mean - r.theory.inv_zeta_k), s.stddev});
    xs.push_back(static_cast<double>(n));
    sds.push_back(s.stddev);
    errs.push_back(out.points.back().abs_error);
  }
  out.stddev_slope = log_log_slope(xs, sds);
  out.error_slope = log_log_slope(xs, errs);
  return out;
}

}  // namespace vislat
