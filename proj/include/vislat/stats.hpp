#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vislat/numtheory.hpp"

namespace vislat {

/// Exact visibility counters over a contiguous step range [lo, hi].
///
/// Singles are bucketed by i mod m, pairs X_{i-1} X_i by the residue of the
/// first index i-1. A pair is credited when its second step is recorded, so an
/// accumulator over [lo, hi] holds pairs with first index in [lo-1, hi-1].
/// Accumulators over adjacent ranges merge exactly; merging checks that the
/// right-hand chunk started from the left chunk's final visibility flag.
class VisAccumulator {
 public:
  explicit VisAccumulator(std::uint64_t modulus = 1, std::uint64_t first_step = 1);

  /// Records X_i. visible_prev is X_{i-1} and is ignored at i = 1.
  void record(std::uint64_t i, bool visible, bool visible_prev);

  /// Concatenates two adjacent chunks (either argument order).
  static VisAccumulator merge(VisAccumulator a, VisAccumulator b);

  [[nodiscard]] bool empty() const noexcept { return steps_total_ == 0; }
  [[nodiscard]] std::uint64_t modulus() const noexcept { return modulus_; }
  [[nodiscard]] std::uint64_t lo() const noexcept { return lo_; }
  [[nodiscard]] std::uint64_t hi() const noexcept { return lo_ + steps_total_ - 1; }
  [[nodiscard]] std::uint64_t steps_total() const noexcept { return steps_total_; }
  [[nodiscard]] std::uint64_t visible_total() const noexcept { return visible_total_; }
  [[nodiscard]] std::uint64_t pair_total() const noexcept { return pair_total_; }
  [[nodiscard]] const std::vector<std::uint64_t>& visible_by_residue() const noexcept { return visible_by_residue_; }
  [[nodiscard]] const std::vector<std::uint64_t>& pair_by_residue() const noexcept { return pair_by_residue_; }
  [[nodiscard]] bool first_prev() const noexcept { return first_prev_; }
  [[nodiscard]] bool last_visible() const noexcept { return last_visible_; }

  friend bool operator==(const VisAccumulator&, const VisAccumulator&) = default;

 private:
  std::uint64_t modulus_;
  std::uint64_t lo_;
  std::uint64_t steps_total_ = 0;
  std::uint64_t visible_total_ = 0;
  std::uint64_t pair_total_ = 0;
  std::vector<std::uint64_t> visible_by_residue_;
  std::vector<std::uint64_t> pair_by_residue_;
  bool first_prev_ = false;
  bool last_visible_ = false;
};

/// Counts over the first n steps extracted from an accumulator over [1, n+1].
///
/// The last recorded step only supplies X_{n+1} for the final pair.
struct WindowCounts {
  std::uint64_t modulus = 1;
  std::uint64_t n = 0;
  std::uint64_t visible = 0;
  std::uint64_t pairs = 0;
  std::vector<std::uint64_t> visible_by_residue;
  std::vector<std::uint64_t> pair_by_residue;

  WindowCounts& operator+=(const WindowCounts& other);
};

WindowCounts window_counts(const VisAccumulator& acc);

enum class Stat { kVisible, kVisibleMod, kPair, kPairMod };
std::string_view stat_name(Stat s);

struct ReportRow {
  Stat stat;
  int k = 2;
  std::optional<std::uint64_t> m;  // set for residue rows
  std::optional<std::uint64_t> a;
  std::uint64_t n = 0;
  std::uint64_t count = 0;
  double proportion = 0.0;
  std::optional<double> theory;
  std::optional<double> abs_error;
  double stderr_ = 0.0;
  std::uint64_t seed = 0;
};

struct Report {
  std::vector<ReportRow> rows;
};

/// Proportions for S, S(a;m), R, R(a;m) with theory targets where the modulus has a closed form.
/// Throws RangeError when the accumulator does not start at step 1 or covers fewer than 2 steps.
Report finalize(const VisAccumulator& acc, const nt::TheoryConstants& theory, std::uint64_t seed = 0);
Report finalize(const WindowCounts& counts, const nt::TheoryConstants& theory, std::uint64_t seed = 0);

inline constexpr const char* kCsvHeader = "stat,k,m,a,n,count,proportion,theory,abs_error,stderr,seed";

/// Shortest round-trip decimal text of a double.
std::string format_double(double x);

void write_csv(std::ostream& os, const Report& report);
std::string to_csv(const Report& report);

}  // namespace vislat
