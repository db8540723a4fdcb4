#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vislat/walk.hpp"

namespace vislat::oracle {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Exact rational for a validated probability; throws DomainError when none is known.
Rational to_rational(const Probability& p);
RationalVector to_rational(const AlphaVector& a);

/// Per-step direction laws beta^(1..n).
class StepSchedule {
 public:
  StepSchedule() = default;
  /// Throws DomainError unless every law has the same k >= 2, positive entries and sum exactly 1.
  explicit StepSchedule(std::vector<RationalVector> steps);

  /// The same law repeated n times.
  static StepSchedule repeated(const RationalVector& law, std::uint64_t n);
  /// The law of the first n steps of a validated config: the mixture vector for iid
  /// policies, the literal alpha_t sequence for cyclic and scripted ones.
  static StepSchedule from_config(const WalkConfig& cfg, std::uint64_t n);

  [[nodiscard]] std::size_t dimension() const noexcept { return k_; }
  [[nodiscard]] std::uint64_t length() const noexcept { return steps_.size(); }
  [[nodiscard]] const RationalVector& step(std::uint64_t i) const { return steps_.at(i); }
  [[nodiscard]] StepSchedule prefix(std::uint64_t n) const;

 private:
  std::size_t k_ = 0;
  std::vector<RationalVector> steps_;
};

/// Largest n accepted for exact enumeration in dimension k.
std::uint64_t default_step_cap(std::size_t k);

struct ExactDist {
  std::uint64_t n = 0;
  std::size_t k = 0;
  std::map<std::vector<std::int64_t>, Rational> entries;

  [[nodiscard]] Rational total() const;
};

/// Law of p_n by stepwise convolution. Throws SizeError beyond the cap.
ExactDist exact_distribution(const StepSchedule& sched, std::optional<std::uint64_t> cap = std::nullopt);

/// E(X_n), n = sched.length() >= 1.
Rational exact_visible_prob(const StepSchedule& sched, std::optional<std::uint64_t> cap = std::nullopt);

/// E(X_n X_{n+1}) for a schedule of n+1 steps (n >= 1).
Rational exact_pair_prob(const StepSchedule& sched, std::optional<std::uint64_t> cap = std::nullopt);

/// Inputs of the congruence-constrained multinomial mass: type t contributes
/// counts[t] steps with law alphas[t]; the constraint is s^(a) = g[a] (mod d)
/// for the first k-1 axes.
struct CongruenceInstance {
  std::vector<std::uint64_t> counts;
  std::vector<RationalVector> alphas;
  std::uint64_t d = 1;
  std::vector<std::int64_t> g;

  [[nodiscard]] std::size_t dimension() const { return alphas.empty() ? 0 : alphas.front().size(); }
  [[nodiscard]] std::uint64_t steps() const;
};

inline constexpr std::uint64_t kResidueStateBudget = 1u << 20;

/// Exact mass by dynamic programming over residue vectors mod d.
Rational L_dp(const CongruenceInstance& inst);

/// The same mass from the additive-character expansion, in complex doubles.
/// The imaginary part is returned for diagnostics; it vanishes analytically.
std::complex<double> L_charsum(const CongruenceInstance& inst);

struct DecayPoint {
  std::uint64_t n = 0;
  Rational max_deviation;  // max over g of |L - d^{-(k-1)}|
  double max_deviation_approx = 0.0;
  bool sums_to_one = false;  // sum over all g of L equals 1 exactly
};

struct DecayTable {
  std::vector<DecayPoint> points;
  std::optional<double> slope;  // log-log slope of the deviation on n
};

/// Deviation of L from its main term over an n grid. Types are assigned cyclically, so
/// type t receives the steps i with (i-1) mod q == t.
DecayTable congruence_decay(std::uint64_t d, const std::vector<RationalVector>& alphas,
                               const std::vector<std::uint64_t>& n_grid);

/// Cyclic split of n steps over q types.
std::vector<std::uint64_t> cyclic_counts(std::uint64_t n, std::size_t q);

std::string to_string(const Rational& r);

}  // namespace vislat::oracle
