#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vislat/rng.hpp"

namespace vislat {

/// Exact value num/den of a probability given in the config (den > 0).
struct Ratio64 {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const Ratio64&, const Ratio64&) = default;
};

/// A probability as a double plus, when representable, its exact rational.
///
/// Doubles convert through their shortest round-trip decimal form, so 0.2
/// is exactly 1/5 rather than the nearest binary fraction.
struct Probability {
  double value = 0.0;
  std::optional<Ratio64> exact;

  Probability() = default;
  Probability(double v);  // NOLINT(google-explicit-constructor)
  Probability(std::int64_t num, std::int64_t den);

  /// Parses "0.25", "1/3" or "3e-1".
  static Probability parse(std::string_view text);
};

/// Step law over the k axis directions.
struct AlphaVector {
  std::vector<Probability> probs;

  AlphaVector() = default;
  AlphaVector(std::initializer_list<Probability> p) : probs(p) {}
  explicit AlphaVector(std::vector<Probability> p) : probs(std::move(p)) {}

  [[nodiscard]] std::size_t dimension() const noexcept { return probs.size(); }
  [[nodiscard]] std::vector<double> values() const;
};

struct IidWeighted {
  std::vector<Probability> weights;  // empty means uniform
};
struct Cyclic {};
struct Scripted {
  std::vector<std::size_t> script;  // 0-based type indices, repeated cyclically
};

using SelectionPolicy = std::variant<IidWeighted, Cyclic, Scripted>;

struct WalkConfig {
  std::size_t k = 2;
  std::vector<AlphaVector> alphas;
  SelectionPolicy policy = IidWeighted{};
  std::uint64_t seed = 0;
  bool validated = false;

  [[nodiscard]] std::size_t num_types() const noexcept { return alphas.size(); }
};

/// Checks the config and normalizes policy weights (uniform when omitted).
/// Throws ConfigError.
WalkConfig validate_config(WalkConfig raw);

/// Type t chosen at step i (1-based) for a deterministic policy, or nullopt for iid.
std::optional<std::size_t> deterministic_type(const WalkConfig& cfg, std::uint64_t step_index);

/// Mixture sum_t w_t alpha_t; the per-step law of an iid-weighted walk.
AlphaVector mixture_vector(const WalkConfig& cfg);

struct Position {
  std::vector<std::int64_t> coords;
  std::uint64_t step_index = 0;

  static Position origin(std::size_t k) { return {std::vector<std::int64_t>(k, 0), 0}; }
};

/// Precomputed integer thresholds for drawing types and directions.
class StepSampler {
 public:
  explicit StepSampler(const WalkConfig& cfg);

  [[nodiscard]] std::size_t dimension() const noexcept { return k_; }
  /// Type index for step i (1-based); consumes one draw only for iid policies with q > 1.
  std::size_t draw_type(std::uint64_t step_index, Rng& rng) const;
  /// Axis index for a given type; consumes one draw.
  std::size_t draw_direction(std::size_t type, Rng& rng) const;

 private:
  static std::vector<std::uint64_t> thresholds(std::span<const double> probs);
  static std::size_t pick(std::span<const std::uint64_t> cut, std::uint64_t u) noexcept;

  enum class Mode { kIid, kCyclic, kScripted };
  std::size_t k_;
  std::size_t q_;
  Mode mode_;
  std::vector<std::uint64_t> type_cut_;
  std::vector<std::size_t> script_;
  std::vector<std::vector<std::uint64_t>> dir_cut_;
};

/// One step of the walk: exactly one coordinate increases by 1.
Position next_step(const Position& pos, const StepSampler& sampler, Rng& rng);

/// gcd of all coordinates, gcd(0, n) = n. Throws DomainError for the zero vector.
std::uint64_t gcd_vec(std::span<const std::int64_t> coords);
bool is_visible(std::span<const std::int64_t> coords);
bool is_visible(const Position& pos);

/// Stateful walk from the origin on stream `stream` of cfg.seed.
class WalkGenerator {
 public:
  static constexpr std::uint64_t kMaxSteps = std::uint64_t{1} << 62;

  WalkGenerator(const WalkConfig& cfg, std::uint64_t stream);

  /// Advances one step and returns whether the new point is visible.
  bool advance();
  [[nodiscard]] const Position& position() const noexcept { return pos_; }

 private:
  StepSampler sampler_;
  Rng rng_;
  Position pos_;
};

}  // namespace vislat
