#include <gtest/gtest.h>

#include <cmath>

#include "vislat/errors.hpp"
#include "vislat/mc.hpp"

using namespace vislat;

namespace {

WalkConfig two_type(SelectionPolicy policy, std::uint64_t seed = 2024) {
  WalkConfig cfg;
  cfg.k = 2;
  cfg.alphas = {AlphaVector{0.2, 0.8}, AlphaVector{0.7, 0.3}};
  cfg.policy = std::move(policy);
  cfg.seed = seed;
  return validate_config(cfg);
}

}  // namespace

TEST(Mc, SingleStepIsAlwaysVisible) {
  const McResult r = mc_run(two_type(IidWeighted{}), {1, 4});
  ASSERT_FALSE(r.summary.empty());
  EXPECT_EQ(r.summary[0].row.stat, Stat::kVisible);
  EXPECT_DOUBLE_EQ(r.summary[0].mean, 1.0);
  EXPECT_EQ(r.pooled.visible, 4u);
  EXPECT_EQ(r.pooled.n, 4u);
}

TEST(Mc, PooledIsSumOfPaths) {
  const McResult r = mc_run(two_type(Cyclic{}), {2000, 6, 3});
  std::uint64_t vis = 0, pairs = 0;
  std::vector<std::uint64_t> by_res(3, 0);
  for (const auto& w : r.per_path_counts) {
    vis += w.visible;
    pairs += w.pairs;
    for (int a = 0; a < 3; ++a) by_res[a] += w.visible_by_residue[a];
  }
  EXPECT_EQ(r.pooled.visible, vis);
  EXPECT_EQ(r.pooled.pairs, pairs);
  EXPECT_EQ(r.pooled.visible_by_residue, by_res);
  EXPECT_EQ(r.pooled.n, 12000u);
  EXPECT_EQ(r.per_path.size(), 6u);
  EXPECT_EQ(r.summary.size(), 8u);  // S, 3 S_mod, R, 3 R_mod
}

TEST(Mc, PathMatchesSimulatePath) {
  const WalkConfig cfg = two_type(IidWeighted{});
  const McResult r = mc_run(cfg, {500, 3, 2});
  for (std::uint64_t p = 0; p < 3; ++p) {
    const WindowCounts w = window_counts(simulate_path(cfg, p, 500, 2));
    EXPECT_EQ(w.visible, r.per_path_counts[p].visible);
    EXPECT_EQ(w.pair_by_residue, r.per_path_counts[p].pair_by_residue);
  }
}

TEST(Mc, IndependentOfParallelism) {
  const WalkConfig cfg = two_type(Scripted{{0, 1, 1}});
  const McResult base = mc_run(cfg, {20'000, 16, 2, 1});
  const std::string csv = to_csv(base.summary_report());
  for (unsigned workers : {4u, 16u, 0u}) {
    const McResult r = mc_run(cfg, {20'000, 16, 2, workers});
    EXPECT_EQ(to_csv(r.summary_report()), csv) << workers;
    for (std::size_t j = 0; j < base.summary.size(); ++j) {
      EXPECT_EQ(r.summary[j].mean, base.summary[j].mean);
      EXPECT_EQ(r.summary[j].stddev, base.summary[j].stddev);
    }
  }
}

TEST(Mc, SeedChangesResult) {
  const McResult a = mc_run(two_type(IidWeighted{}, 1), {5000, 2});
  const McResult b = mc_run(two_type(IidWeighted{}, 2), {5000, 2});
  EXPECT_NE(a.pooled.visible, b.pooled.visible);
}

TEST(Mc, SummaryStatistics) {
  const McResult r = mc_run(two_type(IidWeighted{}), {3000, 5});
  const auto& s = r.summary[0];
  double mean = 0.0;
  for (const auto& rep : r.per_path) mean += rep.rows[0].proportion;
  mean /= 5.0;
  EXPECT_NEAR(s.mean, mean, 1e-15);
  double ss = 0.0;
  for (const auto& rep : r.per_path) ss += std::pow(rep.rows[0].proportion - mean, 2);
  EXPECT_NEAR(s.stddev, std::sqrt(ss / 4.0), 1e-15);
  EXPECT_NEAR(s.row.stderr_, s.stddev / std::sqrt(5.0), 1e-15);
  // With equal path lengths the pooled proportion equals the mean of proportions.
  EXPECT_NEAR(s.row.proportion, s.mean, 1e-14);
}

TEST(Mc, RejectsBadOptions) {
  const WalkConfig cfg = two_type(IidWeighted{});
  EXPECT_THROW(mc_run(cfg, {0, 1}), DomainError);
  EXPECT_THROW(mc_run(cfg, {10, 0}), DomainError);
  EXPECT_THROW(mc_run(cfg, {10, 1, 0}), DomainError);
  EXPECT_THROW(simulate_path(cfg, 0, WalkGenerator::kMaxSteps, 1), OverflowError);
}

TEST(Mc, CheckAgainstTheory) {
  const McResult r = mc_run(two_type(Cyclic{}), {200'000, 4, 2});
  const auto checks = check_against_theory(r, 0.01);
  ASSERT_EQ(checks.size(), 6u);
  for (const auto& c : checks) EXPECT_TRUE(c.pass) << stat_name(c.row.stat) << " " << c.value << " vs " << c.target;
  const auto strict = check_against_theory(r, 0.0);
  for (const auto& c : strict) EXPECT_FALSE(c.pass);
}

TEST(Sweep, ShortGridHasNoSlope) {
  const SweepResult one = convergence_sweep(two_type(IidWeighted{}), {100}, 3);
  ASSERT_EQ(one.points.size(), 1u);
  EXPECT_FALSE(one.stddev_slope.has_value());
  EXPECT_FALSE(one.error_slope.has_value());
  EXPECT_THROW(convergence_sweep(two_type(IidWeighted{}), {}, 3), DomainError);
  EXPECT_THROW(convergence_sweep(two_type(IidWeighted{}), {100, 100}, 3), DomainError);
  EXPECT_THROW(convergence_sweep(two_type(IidWeighted{}), {200, 100}, 3), DomainError);
}

TEST(Sweep, StddevShrinks) {
  const SweepResult r = convergence_sweep(two_type(IidWeighted{}), {1000, 10'000, 100'000}, 12);
  ASSERT_TRUE(r.stddev_slope.has_value());
  EXPECT_LT(*r.stddev_slope, -0.1);
  EXPECT_GT(r.points.front().stddev, r.points.back().stddev);
}

TEST(Sweep, LogLogSlope) {
  std::vector<double> x{1, 10, 100, 1000}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  EXPECT_NEAR(*log_log_slope(x, y), -0.5, 1e-12);
  EXPECT_FALSE(log_log_slope({1, 2}, {1, 2}).has_value());
  EXPECT_FALSE(log_log_slope({1, 2, 3}, {0, 0, 1}).has_value());
  EXPECT_THROW(log_log_slope({1, 2}, {1}), DomainError);
}
