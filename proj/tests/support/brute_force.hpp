#pragma once

// Test-only enumeration oracles. Nothing here calls into the library's
// dynamic programming or convolution paths.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <vector>

namespace vislat::brute {

/// A step law written as integer weights over a common denominator.
struct IntLaw {
  std::vector<std::int64_t> num;
  std::int64_t den = 1;

  [[nodiscard]] mpq_class at(std::size_t j) const {
    mpq_class r(num[j], den);
    r.canonicalize();
    return r;
  }
  [[nodiscard]] std::vector<mpq_class> rational() const {
    std::vector<mpq_class> out;
    for (std::size_t j = 0; j < num.size(); ++j) out.push_back(at(j));
    return out;
  }
};

/// Sum of path weights over every step sequence whose direction counts satisfy
/// s^(a) = g[a] (mod d) for the first k-1 axes. Path weights are products of
/// integer numerators; the result is divided by prod den^{count} once at the end.
inline mpq_class enumerate_paths_L(const std::vector<std::uint64_t>& counts, const std::vector<IntLaw>& laws,
                                   std::uint64_t d, const std::vector<std::int64_t>& g) {
  const std::size_t k = laws.front().num.size();
  std::vector<std::size_t> schedule;
  for (std::size_t t = 0; t < counts.size(); ++t) schedule.insert(schedule.end(), counts[t], t);
  std::vector<std::uint64_t> s(k, 0);
  mpz_class total = 0;
  // Depth-first over all k^n sequences; the running product fits in __int128 for n <= 12, den <= 12.
  auto rec = [&](auto&& self, std::size_t step, __int128 weight) -> void {
    if (step == schedule.size()) {
      for (std::size_t a = 0; a + 1 < k; ++a)
        if (s[a] % d != static_cast<std::uint64_t>(g.empty() ? 0 : g[a])) return;
      const auto hi = static_cast<std::uint64_t>(weight >> 64);
      const auto lo = static_cast<std::uint64_t>(weight);
      mpz_class w = hi;
      w <<= 64;
      w += mpz_class(static_cast<unsigned long>(lo));
      total += w;
      return;
    }
    const IntLaw& law = laws[schedule[step]];
    for (std::size_t j = 0; j < k; ++j) {
      ++s[j];
      self(self, step + 1, weight * law.num[j]);
      --s[j];
    }
  };
  rec(rec, 0, 1);
  mpz_class den = 1;
  for (std::size_t t = 0; t < counts.size(); ++t)
    for (std::uint64_t i = 0; i < counts[t]; ++i) den *= laws[t].den;
  mpq_class out(total, den);
  out.canonicalize();
  return out;
}

/// P(gcd(p_n) = 1) by enumerating all k^n step sequences of a per-step schedule.
inline mpq_class enumerate_paths_visible(const std::vector<std::vector<mpq_class>>& schedule) {
  const std::size_t k = schedule.front().size();
  std::vector<std::int64_t> pos(k, 0);
  mpq_class total = 0;
  auto rec = [&](auto&& self, std::size_t step, const mpq_class& w) -> void {
    if (step == schedule.size()) {
      std::uint64_t g = 0;
      for (auto c : pos) g = std::gcd(g, static_cast<std::uint64_t>(c));
      if (g == 1) total += w;
      return;
    }
    for (std::size_t j = 0; j < k; ++j) {
      ++pos[j];
      self(self, step + 1, w * schedule[step][j]);
      --pos[j];
    }
  };
  rec(rec, 0, mpq_class(1));
  return total;
}

/// mu(n) by trial division.
inline int naive_mobius(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

}  // namespace vislat::brute
