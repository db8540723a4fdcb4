#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace vislat {

/// xoshiro256** with SplitMix64 seeding and stream derivation by jump().
///
/// Stream s of seed S starts at the SplitMix64-seeded state of S advanced by
/// s * 2^128 outputs, so streams never overlap for s < 2^128. Output is fixed
/// for a given (seed, stream) on every platform; changing the algorithm must
/// bump kVersion.
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kVersion = "xoshiro256ss-v1";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Advances the state by 2^128 outputs.
  void jump() noexcept;

  [[nodiscard]] const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace vislat
