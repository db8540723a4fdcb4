#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vislat::nt {

/// Value together with a guaranteed bound on its absolute error.
struct Bounded {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline constexpr std::uint64_t kDefaultSieveBudget = 200'000'000;

/// Möbius function values mu(1..limit), stored as int8.
class MobiusTable {
 public:
  MobiusTable() = default;
  explicit MobiusTable(std::vector<std::int8_t> values) : values_(std::move(values)) {}

  [[nodiscard]] std::uint64_t limit() const noexcept { return values_.size() - 1; }
  /// mu(n) for 1 <= n <= limit(); throws DomainError otherwise.
  [[nodiscard]] int at(std::uint64_t n) const;
  [[nodiscard]] int operator[](std::uint64_t n) const noexcept { return values_[n]; }
  /// Raw storage; index 0 is unused and holds 0.
  [[nodiscard]] std::span<const std::int8_t> values() const noexcept { return values_; }

 private:
  std::vector<std::int8_t> values_{0};
};

/// Sieve for mu(1..limit). Throws SizeError for limit == 0 or limit > budget.
MobiusTable mobius_sieve(std::uint64_t limit, std::uint64_t budget = kDefaultSieveBudget);

/// All primes <= limit in increasing order.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Distinct prime factors of n (n >= 1), increasing.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

/// Number of positive divisors. Throws DomainError for n == 0.
std::uint64_t tau(std::uint64_t n);

/// zeta(k) for integer k >= 2 by direct summation; error_bound <= tol.
Bounded zeta(int k, double tol = 1e-12);

/// prod_p (1 - 2/p^k), error_bound <= tol.
///
/// Evaluated as zeta(k)^{-2} * prod_p (1 - 1/(p^k - 1)^2); the second product
/// converges like sum p^{-2k}, so a short prime range gives a rigorous bound.
Bounded euler_product_two(int k, double tol = 1e-12);

/// prod_{p <= prime_limit} (1 - 2/p^k) with the tail bound 2 P^{1-k}/(k-1).
/// Slow to converge; kept as an independent check of euler_product_two.
Bounded euler_product_two_direct(int k, std::uint64_t prime_limit);

struct TheoryConstants {
  int k = 2;
  double inv_zeta_k = 0.0;  // 1/zeta(k)
  double euler2_k = 0.0;    // prod_p (1 - 2/p^k)
  double tolerance = 0.0;   // bound on the absolute error of both values
};

TheoryConstants theory_constants(int k, double tol = 1e-12);

enum class ModulusKind { kPowerOfTwo, kOddPrime };

struct ModulusShape {
  ModulusKind kind;
  std::uint64_t modulus;
  unsigned exponent;  // r for 2^r, 1 for an odd prime
};

/// Classifies m as 2^r (r >= 1) or an odd prime; anything else throws UnsupportedModulus.
ModulusShape classify_modulus(std::uint64_t m);
[[nodiscard]] bool is_supported_modulus(std::uint64_t m) noexcept;

/// Rational prefactor c with delta_k(a;m) = c / zeta(k).
double delta_factor(int k, std::uint64_t a, std::uint64_t m);
/// Rational prefactor c with gamma_k(a;m) = c * prod_p (1 - 2/p^k).
double gamma_factor(int k, std::uint64_t a, std::uint64_t m);

/// Limit of the residue-restricted visible proportion.
double delta_theory(const TheoryConstants& c, std::uint64_t a, std::uint64_t m);
double delta_theory(int k, std::uint64_t a, std::uint64_t m);
/// Limit of the residue-restricted consecutive-visible proportion.
double gamma_theory(const TheoryConstants& c, std::uint64_t a, std::uint64_t m);
double gamma_theory(int k, std::uint64_t a, std::uint64_t m);

/// sum_{d <= n} mu(d) / d^{l-1} * floor(n/d)
double mobius_floor_sum(std::uint64_t n, int l);
/// sum_{i <= n} pair_main_term(i, l)
double coprime_pair_sum(std::uint64_t n, int l);

/// sum_{d | i} mu(d) / d^{k-1}
double ex_main_term(std::uint64_t i, int k);
/// sum over d1 | i, d2 | i+1, gcd(d1,d2) = 1, d1*d2 <= i of mu(d1) mu(d2) / (d1 d2)^{k-1}
double pair_main_term(std::uint64_t i, int k);

/// (1/n) sum_{i <= n, i = a mod m} ex_main_term(i, k)
double T_partial(std::uint64_t n, int k, std::uint64_t a, std::uint64_t m);
/// (1/n) sum_{i <= n, i = a mod m} pair_main_term(i, k)
double G_partial(std::uint64_t n, int k, std::uint64_t a, std::uint64_t m);

}  // namespace vislat::nt
