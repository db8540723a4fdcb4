#include "vislat/numtheory.hpp"

#include <algorithm>
#include <bit>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "vislat/errors.hpp"

namespace vislat::nt {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_order(int k, const char* what) {
  if (k < 2) throw DomainError(std::string(what) + ": exponent must be >= 2, got " + std::to_string(k));
}

void require_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("tolerance must lie in (0, 1)");
}

void require_residue(std::uint64_t a, std::uint64_t m) {
  if (a >= m) throw DomainError("residue " + std::to_string(a) + " out of range for modulus " + std::to_string(m));
}

// Squarefree divisors of the number with the given distinct primes, paired with mu(d).
struct SignedDivisor {
  std::uint64_t d;
  int mu;
};

std::vector<SignedDivisor> squarefree_divisors(const std::vector<std::uint64_t>& primes) {
  std::vector<SignedDivisor> out{{1, 1}};
  out.reserve(std::size_t{1} << primes.size());
  for (std::uint64_t p : primes) {
    const std::size_t sz = out.size();
    for (std::size_t j = 0; j < sz; ++j) out.push_back({out[j].d * p, -out[j].mu});
  }
  return out;
}

double inv_power(std::uint64_t d, int e) { return std::pow(static_cast<double>(d), -static_cast<double>(e)); }

// Smallest-prime-factor table for bulk factorization.
class SpfTable {
 public:
  explicit SpfTable(std::uint64_t limit) : spf_(limit + 1, 0) {
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (spf_[i] != 0) continue;
      for (std::uint64_t j = i; j <= limit; j += i)
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }

  [[nodiscard]] std::vector<std::uint64_t> primes_of(std::uint64_t n) const {
    std::vector<std::uint64_t> out;
    while (n > 1) {
      const std::uint64_t p = spf_[n];
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> spf_;
};

double pair_term_from_primes(std::uint64_t i, const std::vector<std::uint64_t>& pi,
                             const std::vector<std::uint64_t>& pnext, int k) {
  const auto d1s = squarefree_divisors(pi);
  const auto d2s = squarefree_divisors(pnext);
  CompensatedSum s;
  // gcd(i, i+1) = 1, so every (d1, d2) pair is automatically coprime.
  for (const auto& a : d1s) {
    for (const auto& b : d2s) {
      if (a.d > i / b.d) continue;
      s += (a.mu * b.mu) * inv_power(a.d * b.d, k - 1);
    }
  }
  return s.value();
}

double ex_term_from_primes(const std::vector<std::uint64_t>& primes, int k) {
  CompensatedSum s;
  for (const auto& dv : squarefree_divisors(primes)) s += dv.mu * inv_power(dv.d, k - 1);
  return s.value();
}

std::uint64_t first_in_class(std::uint64_t a, std::uint64_t m) { return a == 0 ? m : a; }

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

int MobiusTable::at(std::uint64_t n) const {
  if (n == 0 || n > limit()) throw DomainError("mobius index " + std::to_string(n) + " outside table");
  return values_[n];
}

MobiusTable mobius_sieve(std::uint64_t limit, std::uint64_t budget) {
  if (limit == 0) throw SizeError("mobius_sieve: limit must be >= 1");
  if (limit > budget)
    throw SizeError("mobius_sieve: limit " + std::to_string(limit) + " exceeds budget " + std::to_string(budget));
  std::vector<std::int8_t> mu(limit + 1, 1);
  std::vector<bool> composite(limit + 1, false);
  mu[0] = 0;
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t j = p; j <= limit; j += p) {
      if (j != p) composite[j] = true;
      mu[j] = static_cast<std::int8_t>(-mu[j]);
    }
    if (p <= limit / p)
      for (std::uint64_t j = p * p; j <= limit; j += p * p) mu[j] = 0;
  }
  return MobiusTable(std::move(mu));
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    if (p <= limit / p)
      for (std::uint64_t j = p * p; j <= limit; j += p) composite[j] = true;
  }
  return primes;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  if (n == 0) throw DomainError("distinct_prime_factors: n must be >= 1");
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t tau(std::uint64_t n) {
  if (n == 0) throw DomainError("tau: n must be >= 1");
  std::uint64_t count = 1;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    count *= e + 1;
  }
  if (n > 1) count *= 2;
  return count;
}

Bounded zeta(int k, double tol) {
  require_order(k, "zeta");
  require_tol(tol);
  const double kk = k;
  // The tail sum_{d>D} d^{-k} lies between the integrals from D+1 and from D;
  // adding the midpoint leaves at most half the bracket width, which is <= D^{-k}/2.
  auto terms = static_cast<std::uint64_t>(std::ceil(std::pow(tol, -1.0 / kk)));
  terms = std::max<std::uint64_t>(terms, 2);
  CompensatedSum s;
  for (std::uint64_t d = terms; d >= 1; --d) s += inv_power(d, k);
  const double upper = std::pow(static_cast<double>(terms), 1.0 - kk) / (kk - 1.0);
  const double lower = std::pow(static_cast<double>(terms + 1), 1.0 - kk) / (kk - 1.0);
  s += 0.5 * (upper + lower);
  const double value = s.value();
  const double half_width = 0.5 * (upper - lower);
  return {value, half_width + 8.0 * kEps * value};
}

Bounded euler_product_two(int k, double tol) {
  require_order(k, "euler_product_two");
  require_tol(tol);
  const Bounded z = zeta(k, tol / 6.0);
  const double e2 = 2.0 * k - 1.0;
  auto limit = static_cast<std::uint64_t>(std::ceil(std::pow(16.0 / (e2 * tol), 1.0 / e2)));
  limit = std::max<std::uint64_t>(limit, 2);
  const auto primes = primes_up_to(limit);
  long double q = 1.0L;
  for (std::uint64_t p : primes) {
    const long double pk1 = std::pow(static_cast<long double>(p), static_cast<long double>(k)) - 1.0L;
    q *= 1.0L - 1.0L / (pk1 * pk1);
  }
  // 1/(p^k - 1)^2 <= 4/p^{2k}; sum_{n>P} 4 n^{-2k} <= 4 P^{1-2k}/(2k-1).
  const double tail = 4.0 * std::pow(static_cast<double>(limit), -e2) / e2;
  const double rounding_q = static_cast<double>(primes.size() + 2) * 4.0 * LDBL_EPSILON;
  const long double zv = z.value;
  const double value = static_cast<double>(q / (zv * zv));
  return {value, tail + rounding_q + 3.0 * z.error_bound + 4.0 * kEps};
}

Bounded euler_product_two_direct(int k, std::uint64_t prime_limit) {
  require_order(k, "euler_product_two_direct");
  if (prime_limit < 2) throw DomainError("euler_product_two_direct: prime limit must be >= 2");
  const auto primes = primes_up_to(prime_limit);
  long double prod = 1.0L;
  for (std::uint64_t p : primes)
    prod *= 1.0L - 2.0L / std::pow(static_cast<long double>(p), static_cast<long double>(k));
  const double tail = 2.0 * std::pow(static_cast<double>(prime_limit), 1.0 - k) / (k - 1.0);
  const double rounding = static_cast<double>(primes.size() + 2) * 4.0 * LDBL_EPSILON + 4.0 * kEps;
  return {static_cast<double>(prod), tail + rounding};
}

TheoryConstants theory_constants(int k, double tol) {
  const Bounded z = zeta(k, tol / 4.0);
  const Bounded e = euler_product_two(k, tol);
  // |1/z' - 1/z| <= |z' - z| since both are >= 1.
  return {k, 1.0 / z.value, e.value, std::max(z.error_bound + 2.0 * kEps, e.error_bound)};
}

ModulusShape classify_modulus(std::uint64_t m) {
  if (m >= 2 && (m & (m - 1)) == 0)
    return {ModulusKind::kPowerOfTwo, m, static_cast<unsigned>(std::countr_zero(m))};
  if (m >= 3 && (m & 1) != 0 && distinct_prime_factors(m) == std::vector<std::uint64_t>{m})
    return {ModulusKind::kOddPrime, m, 1};
  throw UnsupportedModulus("modulus " + std::to_string(m) +
                           " unsupported: closed forms are known only for m = 2^r (r >= 1) and odd primes m");
}

bool is_supported_modulus(std::uint64_t m) noexcept {
  try {
    classify_modulus(m);
    return true;
  } catch (const UnsupportedModulus&) {
    return false;
  }
}

double delta_factor(int k, std::uint64_t a, std::uint64_t m) {
  require_order(k, "delta_theory");
  const ModulusShape shape = classify_modulus(m);
  require_residue(a, m);
  if (shape.kind == ModulusKind::kPowerOfTwo) {
    const int r = static_cast<int>(shape.exponent);
    const double two_mk = std::ldexp(1.0, -k);
    if (a % 2 == 1) return std::ldexp(1.0, -r) / (1.0 - two_mk);  // 2^{k-r}/(2^k-1)
    return std::ldexp(0.5 - two_mk, 1 - r) / (1.0 - two_mk);     // (2^{k-1}-1)/(2^{r-1}(2^k-1))
  }
  const double p = static_cast<double>(m);
  const double p1k = std::pow(p, 1.0 - k);
  if (a == 0) return (1.0 - p1k) / (p - p1k);  // (p^{k-1}-1)/(p^k-1)
  return 1.0 / (p - p1k);                      // p^{k-1}/(p^k-1)
}

double gamma_factor(int k, std::uint64_t a, std::uint64_t m) {
  require_order(k, "gamma_theory");
  const ModulusShape shape = classify_modulus(m);
  require_residue(a, m);
  if (shape.kind == ModulusKind::kPowerOfTwo) return std::ldexp(1.0, -static_cast<int>(shape.exponent));
  const double p = static_cast<double>(m);
  const double p1k = std::pow(p, 1.0 - k);
  if (a == 0 || a == m - 1) return (1.0 - p1k) / (p - 2.0 * p1k);  // (p^{k-1}-1)/(p^k-2)
  return 1.0 / (p - 2.0 * p1k);                                     // p^{k-1}/(p^k-2)
}

double delta_theory(const TheoryConstants& c, std::uint64_t a, std::uint64_t m) {
  return delta_factor(c.k, a, m) * c.inv_zeta_k;
}

double delta_theory(int k, std::uint64_t a, std::uint64_t m) {
  const double f = delta_factor(k, a, m);
  return f / zeta(k).value;
}

double gamma_theory(const TheoryConstants& c, std::uint64_t a, std::uint64_t m) {
  return gamma_factor(c.k, a, m) * c.euler2_k;
}

double gamma_theory(int k, std::uint64_t a, std::uint64_t m) {
  const double f = gamma_factor(k, a, m);
  return f * euler_product_two(k).value;
}

double mobius_floor_sum(std::uint64_t n, int l) {
  require_order(l, "mobius_floor_sum");
  if (n == 0) throw DomainError("mobius_floor_sum: n must be >= 1");
  const MobiusTable mu = mobius_sieve(n);
  CompensatedSum s;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (mu[d] == 0) continue;
    s += mu[d] * inv_power(d, l - 1) * static_cast<double>(n / d);
  }
  return s.value();
}

double coprime_pair_sum(std::uint64_t n, int l) {
  require_order(l, "coprime_pair_sum");
  if (n == 0) throw DomainError("coprime_pair_sum: n must be >= 1");
  const SpfTable spf(n + 1);
  CompensatedSum s;
  auto current = spf.primes_of(1);
  for (std::uint64_t i = 1; i <= n; ++i) {
    auto next = spf.primes_of(i + 1);
    s += pair_term_from_primes(i, current, next, l);
    current = std::move(next);
  }
  return s.value();
}

double ex_main_term(std::uint64_t i, int k) {
  require_order(k, "ex_main_term");
  if (i == 0) throw DomainError("ex_main_term: i must be >= 1");
  return ex_term_from_primes(distinct_prime_factors(i), k);
}

double pair_main_term(std::uint64_t i, int k) {
  require_order(k, "pair_main_term");
  if (i == 0) throw DomainError("pair_main_term: i must be >= 1");
  return pair_term_from_primes(i, distinct_prime_factors(i), distinct_prime_factors(i + 1), k);
}

double T_partial(std::uint64_t n, int k, std::uint64_t a, std::uint64_t m) {
  require_order(k, "T_partial");
  if (n == 0 || m == 0) throw DomainError("T_partial: n and m must be >= 1");
  require_residue(a, m);
  const SpfTable spf(n);
  CompensatedSum s;
  for (std::uint64_t i = first_in_class(a, m); i <= n; i += m) s += ex_term_from_primes(spf.primes_of(i), k);
  return s.value() / static_cast<double>(n);
}

double G_partial(std::uint64_t n, int k, std::uint64_t a, std::uint64_t m) {
  require_order(k, "G_partial");
  if (n == 0 || m == 0) throw DomainError("G_partial: n and m must be >= 1");
  require_residue(a, m);
  const SpfTable spf(n + 1);
  CompensatedSum s;
  for (std::uint64_t i = first_in_class(a, m); i <= n; i += m)
    s += pair_term_from_primes(i, spf.primes_of(i), spf.primes_of(i + 1), k);
  return s.value() / static_cast<double>(n);
}

}  // namespace vislat::nt
