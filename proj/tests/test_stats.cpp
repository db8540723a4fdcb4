#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "vislat/errors.hpp"
#include "vislat/stats.hpp"

using namespace vislat;

namespace {

VisAccumulator run(const std::vector<bool>& x, std::uint64_t m, std::uint64_t lo, std::uint64_t hi) {
  VisAccumulator acc(m, lo);
  for (std::uint64_t i = lo; i <= hi; ++i) acc.record(i, x[i], i >= 2 && x[i - 1]);
  return acc;
}

// x[0] unused; x[1..len]. X_1 is always visible.
std::vector<bool> random_sequence(std::size_t len, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(0.6);
  std::vector<bool> x(len + 1, false);
  x[1] = true;
  for (std::size_t i = 2; i <= len; ++i) x[i] = coin(gen);
  return x;
}

}  // namespace

TEST(Accumulator, SmallExample) {
  // X = 1 0 1 1, m = 2
  VisAccumulator acc(2);
  acc.record(1, true, false);
  acc.record(2, false, true);
  acc.record(3, true, false);
  acc.record(4, true, true);
  EXPECT_EQ(acc.visible_total(), 3u);
  EXPECT_EQ(acc.pair_total(), 1u);
  EXPECT_EQ(acc.visible_by_residue(), (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(acc.pair_by_residue(), (std::vector<std::uint64_t>{0, 1}));  // pair (3,4) sits at 3

  const WindowCounts w = window_counts(acc);
  EXPECT_EQ(w.n, 3u);
  EXPECT_EQ(w.visible, 2u);  // X_4 is lookahead only
  EXPECT_EQ(w.visible_by_residue, (std::vector<std::uint64_t>{0, 2}));
  EXPECT_EQ(w.pairs, 1u);
}

TEST(Accumulator, RejectsGapsAndBadArgs) {
  VisAccumulator acc(3);
  acc.record(1, true, false);
  EXPECT_THROW(acc.record(3, true, true), RangeError);
  EXPECT_THROW(acc.record(1, true, false), RangeError);
  EXPECT_THROW(VisAccumulator(0), DomainError);
  EXPECT_THROW(VisAccumulator(1, 0), RangeError);
  EXPECT_THROW(window_counts(acc), RangeError);  // only one step
  EXPECT_THROW(window_counts(VisAccumulator(1, 5)), RangeError);
}

TEST(Accumulator, ResidueSumsMatchTotals) {
  const auto x = random_sequence(5000, 1);
  for (std::uint64_t m : {1u, 2u, 3u, 4u, 7u, 8u}) {
    const auto acc = run(x, m, 1, 5000);
    const auto& v = acc.visible_by_residue();
    const auto& p = acc.pair_by_residue();
    EXPECT_EQ(std::accumulate(v.begin(), v.end(), std::uint64_t{0}), acc.visible_total());
    EXPECT_EQ(std::accumulate(p.begin(), p.end(), std::uint64_t{0}), acc.pair_total());
    EXPECT_LE(acc.pair_total(), acc.visible_total());
  }
}

TEST(Accumulator, PairConventionMatchesDirectLoop) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 1000 + seed * 37;
    const auto x = random_sequence(n + 1, seed);
    const std::uint64_t m = 2 + seed % 5;
    const WindowCounts w = window_counts(run(x, m, 1, n + 1));
    std::vector<std::uint64_t> vis(m, 0), pairs(m, 0);
    for (std::size_t i = 1; i <= n; ++i) {
      if (x[i]) ++vis[i % m];
      if (x[i] && x[i + 1]) ++pairs[i % m];
    }
    EXPECT_EQ(w.visible_by_residue, vis);
    EXPECT_EQ(w.pair_by_residue, pairs);
  }
}

TEST(Merge, ChunkedEqualsSequential) {
  const auto x = random_sequence(3000, 9);
  const auto whole = run(x, 6, 1, 3000);
  for (std::uint64_t cut : {1u, 2u, 17u, 1500u, 2999u}) {
    const auto left = run(x, 6, 1, cut);
    const auto right = run(x, 6, cut + 1, 3000);
    EXPECT_EQ(VisAccumulator::merge(left, right), whole);
    EXPECT_EQ(VisAccumulator::merge(right, left), whole);  // commutative
  }
}

TEST(Merge, AssociativeAndIdentity) {
  const auto x = random_sequence(900, 4);
  const auto a = run(x, 4, 1, 300);
  const auto b = run(x, 4, 301, 600);
  const auto c = run(x, 4, 601, 900);
  EXPECT_EQ(VisAccumulator::merge(VisAccumulator::merge(a, b), c),
            VisAccumulator::merge(a, VisAccumulator::merge(b, c)));
  EXPECT_EQ(VisAccumulator::merge(a, VisAccumulator(4, 301)), a);
  EXPECT_EQ(VisAccumulator::merge(VisAccumulator(4, 1), a), a);
}

TEST(Merge, Rejections) {
  const auto x = random_sequence(100, 2);
  EXPECT_THROW(VisAccumulator::merge(run(x, 2, 1, 40), run(x, 3, 41, 100)), RangeError);
  EXPECT_THROW(VisAccumulator::merge(run(x, 2, 1, 40), run(x, 2, 42, 100)), RangeError);
  EXPECT_THROW(VisAccumulator::merge(run(x, 2, 1, 40), VisAccumulator(2, 60)), RangeError);

  // A right chunk whose boundary flag disagrees with the left chunk's last step.
  VisAccumulator left(2);
  left.record(1, true, false);
  left.record(2, false, true);
  VisAccumulator right(2, 3);
  right.record(3, true, true);
  EXPECT_THROW(VisAccumulator::merge(left, right), RangeError);
}

TEST(Window, PoolingAddsCounts) {
  const auto x = random_sequence(200, 5);
  WindowCounts a = window_counts(run(x, 3, 1, 101));
  const WindowCounts b = window_counts(run(x, 3, 1, 51));
  const std::uint64_t before = a.visible;
  a += b;
  EXPECT_EQ(a.n, 150u);
  EXPECT_EQ(a.visible, before + b.visible);
  WindowCounts wrong;
  wrong.modulus = 2;
  EXPECT_THROW(a += wrong, RangeError);
}

TEST(Report, FinalizeRowsAndTheory) {
  const auto x = random_sequence(1001, 3);
  const auto theory = nt::theory_constants(2);
  const Report r = finalize(run(x, 2, 1, 1001), theory, 7);
  ASSERT_EQ(r.rows.size(), 6u);
  EXPECT_EQ(r.rows[0].stat, Stat::kVisible);
  EXPECT_EQ(r.rows[0].n, 1000u);
  EXPECT_DOUBLE_EQ(*r.rows[0].theory, theory.inv_zeta_k);
  EXPECT_EQ(*r.rows[1].a, 0u);
  EXPECT_EQ(*r.rows[1].m, 2u);
  EXPECT_DOUBLE_EQ(*r.rows[1].theory, nt::delta_theory(theory, 0, 2));
  EXPECT_EQ(r.rows[3].stat, Stat::kPair);
  EXPECT_DOUBLE_EQ(*r.rows[3].theory, theory.euler2_k);
  EXPECT_EQ(r.rows[5].stat, Stat::kPairMod);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.seed, 7u);
    EXPECT_DOUBLE_EQ(*row.abs_error, std::fabs(row.proportion - *row.theory));
  }
}

TEST(Report, UnsupportedModulusHasNoTheory) {
  const auto x = random_sequence(101, 3);
  const Report r = finalize(run(x, 6, 1, 101), nt::theory_constants(2));
  ASSERT_EQ(r.rows.size(), 14u);
  EXPECT_TRUE(r.rows[0].theory.has_value());
  EXPECT_FALSE(r.rows[1].theory.has_value());
  EXPECT_FALSE(r.rows[1].abs_error.has_value());
}

TEST(Csv, Format) {
  Report r;
  ReportRow s{Stat::kVisible, 2, std::nullopt, std::nullopt, 4, 3, 0.75, 0.6079271018540267,
              0.1420728981459733, 0.21650635094610965, 11};
  ReportRow sm{Stat::kVisibleMod, 2, 3, 1, 4, 2, 0.5, std::nullopt, std::nullopt, 0.25, 11};
  r.rows = {s, sm};
  EXPECT_EQ(to_csv(r),
            "stat,k,m,a,n,count,proportion,theory,abs_error,stderr,seed\n"
            "S,2,,,4,3,0.75,0.6079271018540267,0.1420728981459733,0.21650635094610965,11\n"
            "S_mod,2,3,1,4,2,0.5,,,0.25,11\n");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-20), "1e-20");
}
