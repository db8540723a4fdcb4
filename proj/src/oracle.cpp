#include "vislat/oracle.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "vislat/errors.hpp"
#include "vislat/mc.hpp"

namespace vislat::oracle {
namespace {

std::uint64_t checked_states(std::uint64_t d, std::size_t dims) {
  std::uint64_t states = 1;
  for (std::size_t a = 0; a < dims; ++a) {
    if (states > kResidueStateBudget / d) throw SizeError("residue state space d^(k-1) exceeds budget");
    states *= d;
  }
  return states;
}

void validate_instance(const CongruenceInstance& inst) {
  if (inst.d == 0) throw DomainError("modulus d must be >= 1");
  if (inst.alphas.empty()) throw DomainError("at least one step law is required");
  if (inst.counts.size() != inst.alphas.size()) throw DomainError("counts and alphas must have equal length");
  const std::size_t k = inst.dimension();
  if (k < 2) throw DomainError("dimension must be >= 2");
  for (const auto& a : inst.alphas) {
    if (a.size() != k) throw DomainError("all step laws must share the dimension");
    Rational sum = 0;
    for (const auto& x : a) {
      if (x <= 0 || x >= 1) throw DomainError("step probabilities must lie strictly in (0,1)");
      sum += x;
    }
    if (sum != 1) throw DomainError("step probabilities must sum to exactly 1");
  }
  if (!inst.g.empty() && inst.g.size() != k - 1) throw DomainError("residue vector must have k-1 entries");
  for (std::int64_t g : inst.g)
    if (g < 0 || static_cast<std::uint64_t>(g) >= inst.d) throw DomainError("residue out of range [0, d)");
  checked_states(inst.d, k - 1);
}

// Law of (s^(1), ..., s^(k-1)) mod d, indexed by sum_a r_a d^(a-1).
std::vector<Rational> residue_law(const CongruenceInstance& inst) {
  const std::size_t k = inst.dimension();
  const std::uint64_t d = inst.d;
  const std::uint64_t states = checked_states(d, k - 1);
  std::vector<std::uint64_t> stride(k - 1, 1);
  for (std::size_t a = 1; a + 1 < k; ++a) stride[a] = stride[a - 1] * d;

  std::vector<Rational> law(states, Rational(0));
  law[0] = 1;
  std::vector<Rational> next(states);
  for (std::size_t t = 0; t < inst.alphas.size(); ++t) {
    const RationalVector& alpha = inst.alphas[t];
    for (std::uint64_t step = 0; step < inst.counts[t]; ++step) {
      for (auto& x : next) x = 0;
      for (std::uint64_t s = 0; s < states; ++s) {
        if (law[s] == 0) continue;
        next[s] += law[s] * alpha[k - 1];  // last axis is unconstrained
        for (std::size_t a = 0; a + 1 < k; ++a) {
          const std::uint64_t digit = (s / stride[a]) % d;
          const std::uint64_t moved = digit + 1 == d ? s - digit * stride[a] : s + stride[a];
          next[moved] += law[s] * alpha[a];
        }
      }
      law.swap(next);
    }
  }
  return law;
}

std::uint64_t encode(const std::vector<std::int64_t>& g, std::uint64_t d, std::size_t dims) {
  std::uint64_t idx = 0;
  std::uint64_t stride = 1;
  for (std::size_t a = 0; a < dims; ++a) {
    if (!g.empty()) idx += static_cast<std::uint64_t>(g[a]) * stride;
    stride *= d;
  }
  return idx;
}

std::complex<double> ipow(std::complex<double> base, std::uint64_t e) {
  std::complex<double> out(1.0, 0.0);
  while (e != 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

std::complex<double> unit_root(std::uint64_t num, std::uint64_t d) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num % d) / static_cast<double>(d);
  return std::polar(1.0, angle);
}

}  // namespace

Rational to_rational(const Probability& p) {
  if (!p.exact) throw DomainError("non-rational input: probability " + std::to_string(p.value) + " has no exact form");
  return Rational(mpz_class(std::to_string(p.exact->num)), mpz_class(std::to_string(p.exact->den)));
}

RationalVector to_rational(const AlphaVector& a) {
  RationalVector out;
  for (const auto& p : a.probs) {
    Rational r = to_rational(p);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

StepSchedule::StepSchedule(std::vector<RationalVector> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) return;
  k_ = steps_.front().size();
  if (k_ < 2) throw DomainError("dimension must be >= 2");
  for (const auto& law : steps_) {
    if (law.size() != k_) throw DomainError("all step laws must share the dimension");
    Rational sum = 0;
    for (const auto& x : law) {
      if (x <= 0 || x >= 1) throw DomainError("step probabilities must lie strictly in (0,1)");
      sum += x;
    }
    if (sum != 1) throw DomainError("step probabilities must sum to exactly 1");
  }
}

StepSchedule StepSchedule::repeated(const RationalVector& law, std::uint64_t n) {
  return StepSchedule(std::vector<RationalVector>(n, law));
}

StepSchedule StepSchedule::from_config(const WalkConfig& cfg, std::uint64_t n) {
  if (!cfg.validated) throw ConfigError("schedule needs a validated config");
  if (std::holds_alternative<IidWeighted>(cfg.policy)) return repeated(to_rational(mixture_vector(cfg)), n);
  std::vector<RationalVector> laws;
  for (std::size_t t = 0; t < cfg.num_types(); ++t) laws.push_back(to_rational(cfg.alphas[t]));
  std::vector<RationalVector> steps;
  steps.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) steps.push_back(laws[*deterministic_type(cfg, i)]);
  return StepSchedule(std::move(steps));
}

StepSchedule StepSchedule::prefix(std::uint64_t n) const {
  if (n > steps_.size()) throw DomainError("prefix longer than schedule");
  return StepSchedule(std::vector<RationalVector>(steps_.begin(), steps_.begin() + static_cast<std::ptrdiff_t>(n)));
}

std::uint64_t default_step_cap(std::size_t k) {
  if (k <= 2) return 40;
  if (k == 3) return 25;
  // Largest n with C(n+k-1, k-1) <= 20000, at most 25.
  std::uint64_t n = 0;
  for (std::uint64_t cand = 1; cand <= 25; ++cand) {
    double c = 1.0;
    for (std::size_t j = 1; j < k; ++j) c = c * static_cast<double>(cand + j) / static_cast<double>(j);
    if (c > 20000.0) break;
    n = cand;
  }
  return std::max<std::uint64_t>(n, 1);
}

Rational ExactDist::total() const {
  Rational s = 0;
  for (const auto& [pos, mass] : entries) s += mass;
  return s;
}

ExactDist exact_distribution(const StepSchedule& sched, std::optional<std::uint64_t> cap) {
  const std::uint64_t n = sched.length();
  if (n == 0) throw DomainError("schedule must contain at least one step");
  const std::size_t k = sched.dimension();
  const std::uint64_t limit = cap.value_or(default_step_cap(k));
  if (n > limit)
    throw SizeError("exact enumeration capped at n = " + std::to_string(limit) + " for k = " + std::to_string(k));
  ExactDist dist;
  dist.n = n;
  dist.k = k;
  dist.entries.emplace(std::vector<std::int64_t>(k, 0), Rational(1));
  for (std::uint64_t i = 0; i < n; ++i) {
    const RationalVector& law = sched.step(i);
    std::map<std::vector<std::int64_t>, Rational> next;
    for (const auto& [pos, mass] : dist.entries) {
      for (std::size_t j = 0; j < k; ++j) {
        auto moved = pos;
        ++moved[j];
        next[moved] += mass * law[j];
      }
    }
    dist.entries.swap(next);
  }
  return dist;
}

Rational exact_visible_prob(const StepSchedule& sched, std::optional<std::uint64_t> cap) {
  const ExactDist dist = exact_distribution(sched, cap);
  Rational p = 0;
  for (const auto& [pos, mass] : dist.entries)
    if (is_visible(pos)) p += mass;
  return p;
}

Rational exact_pair_prob(const StepSchedule& sched, std::optional<std::uint64_t> cap) {
  if (sched.length() < 2) throw DomainError("pair probability needs a schedule of n+1 >= 2 steps");
  const std::uint64_t n = sched.length() - 1;
  const ExactDist dist = exact_distribution(sched.prefix(n), cap);
  const RationalVector& last = sched.step(n);
  Rational p = 0;
  for (const auto& [pos, mass] : dist.entries) {
    if (!is_visible(pos)) continue;
    auto moved = pos;
    for (std::size_t j = 0; j < dist.k; ++j) {
      ++moved[j];
      if (is_visible(moved)) p += mass * last[j];
      --moved[j];
    }
  }
  return p;
}

std::uint64_t CongruenceInstance::steps() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

Rational L_dp(const CongruenceInstance& inst) {
  validate_instance(inst);
  const auto law = residue_law(inst);
  return law[encode(inst.g, inst.d, inst.dimension() - 1)];
}

std::complex<double> L_charsum(const CongruenceInstance& inst) {
  validate_instance(inst);
  const std::size_t k = inst.dimension();
  const std::size_t dims = k - 1;
  const std::uint64_t d = inst.d;
  const std::uint64_t states = checked_states(d, dims);
  std::vector<std::vector<double>> alphas;
  for (const auto& a : inst.alphas) {
    std::vector<double> row;
    for (const auto& x : a) row.push_back(x.get_d());
    alphas.push_back(std::move(row));
  }
  std::vector<std::uint64_t> h(dims, 0);
  std::complex<double> total(0.0, 0.0);
  for (std::uint64_t idx = 0; idx < states; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t a = 0; a < dims; ++a) {
      h[a] = rest % d;
      rest /= d;
    }
    std::complex<double> term(1.0, 0.0);
    for (std::size_t a = 0; a < dims; ++a) {
      const std::uint64_t g = inst.g.empty() ? 0 : static_cast<std::uint64_t>(inst.g[a]);
      term *= unit_root((d - (h[a] * g) % d) % d, d);
    }
    for (std::size_t t = 0; t < alphas.size(); ++t) {
      std::complex<double> base(alphas[t][k - 1], 0.0);
      for (std::size_t a = 0; a < dims; ++a) base += alphas[t][a] * unit_root(h[a], d);
      term *= ipow(base, inst.counts[t]);
    }
    total += term;
  }
  return total / static_cast<double>(states);
}

std::vector<std::uint64_t> cyclic_counts(std::uint64_t n, std::size_t q) {
  if (q == 0) throw DomainError("at least one type is required");
  std::vector<std::uint64_t> counts(q, n / q);
  for (std::size_t t = 0; t < n % q; ++t) ++counts[t];
  return counts;
}

DecayTable congruence_decay(std::uint64_t d, const std::vector<RationalVector>& alphas,
                               const std::vector<std::uint64_t>& n_grid) {
  if (n_grid.empty()) throw DomainError("congruence_decay: grid too small");
  if (alphas.empty()) throw DomainError("congruence_decay: no step laws");
  const std::size_t k = alphas.front().size();
  DecayTable table;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::uint64_t n : n_grid) {
    CongruenceInstance inst{cyclic_counts(n, alphas.size()), alphas, d, {}};
    validate_instance(inst);
    const auto law = residue_law(inst);
    Rational main_term(1);
    for (std::size_t a = 0; a + 1 < k; ++a) main_term /= Rational(mpz_class(std::to_string(d)));
    DecayPoint pt;
    pt.n = n;
    pt.max_deviation = 0;
    Rational sum = 0;
    for (const auto& p : law) {
      sum += p;
      Rational dev = abs(p - main_term);
      if (dev > pt.max_deviation) pt.max_deviation = dev;
    }
    pt.sums_to_one = sum == 1;
    pt.max_deviation_approx = pt.max_deviation.get_d();
    table.points.push_back(pt);
    xs.push_back(static_cast<double>(n));
    ys.push_back(pt.max_deviation_approx);
  }
  table.slope = log_log_slope(xs, ys);
  return table;
}

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

}  // namespace vislat::oracle
