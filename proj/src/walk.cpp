#include "vislat/walk.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vislat/errors.hpp"

namespace vislat {
namespace {

using i128 = __int128;

std::optional<Ratio64> reduce(i128 num, i128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || num < -kMax || den > kMax) return std::nullopt;
  return Ratio64{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::optional<Ratio64> add(const std::optional<Ratio64>& a, const std::optional<Ratio64>& b) {
  if (!a || !b) return std::nullopt;
  return reduce(i128{a->num} * b->den + i128{b->num} * a->den, i128{a->den} * b->den);
}

std::optional<Ratio64> mul(const std::optional<Ratio64>& a, const std::optional<Ratio64>& b) {
  if (!a || !b) return std::nullopt;
  return reduce(i128{a->num} * b->num, i128{a->den} * b->den);
}

std::optional<Ratio64> divide(const std::optional<Ratio64>& a, const std::optional<Ratio64>& b) {
  if (!a || !b || b->num == 0) return std::nullopt;
  return reduce(i128{a->num} * b->den, i128{a->den} * b->num);
}

// Exact rational value of a decimal literal such as "-0.125e2"; nullopt if it does not fit.
std::optional<Ratio64> exact_decimal(std::string_view s) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
  i128 mantissa = 0;
  int scale = 0;
  bool any_digit = false;
  bool after_point = false;
  constexpr i128 kCap = i128{1} << 100;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c == '.' && !after_point) {
      after_point = true;
      continue;
    }
    if (c < '0' || c > '9') break;
    any_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (mantissa > kCap) return std::nullopt;
    if (after_point) --scale;
  }
  if (!any_digit) return std::nullopt;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    int exp10 = 0;
    const char* first = s.data() + pos + 1;
    if (first < s.data() + s.size() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), exp10);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    scale += exp10;
  } else if (pos != s.size()) {
    return std::nullopt;
  }
  if (scale > 30 || scale < -30) return std::nullopt;
  i128 den = 1;
  for (int i = 0; i < -scale; ++i) den *= 10;
  for (int i = 0; i < scale; ++i) {
    mantissa *= 10;
    if (mantissa > kCap) return std::nullopt;
  }
  return reduce(negative ? -mantissa : mantissa, den);
}

bool all_exact(std::span<const Probability> ps) {
  for (const auto& p : ps)
    if (!p.exact) return false;
  return true;
}

}  // namespace

Probability::Probability(double v) : value(v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec == std::errc{}) exact = exact_decimal(std::string_view(buf, ptr));
}

Probability::Probability(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ConfigError("probability with zero denominator");
  exact = reduce(num, den);
  value = static_cast<double>(num) / static_cast<double>(den);
}

Probability Probability::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t num = 0;
    std::int64_t den = 0;
    auto r1 = std::from_chars(text.data(), text.data() + slash, num);
    auto r2 = std::from_chars(text.data() + slash + 1, text.data() + text.size(), den);
    if (r1.ec != std::errc{} || r1.ptr != text.data() + slash || r2.ec != std::errc{} ||
        r2.ptr != text.data() + text.size())
      throw ConfigError("malformed fraction '" + std::string(text) + "'");
    return Probability(num, den);
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("malformed probability '" + std::string(text) + "'");
  Probability p;
  p.value = v;
  p.exact = exact_decimal(text);
  return p;
}

std::vector<double> AlphaVector::values() const {
  std::vector<double> out;
  out.reserve(probs.size());
  for (const auto& p : probs) out.push_back(p.value);
  return out;
}

WalkConfig validate_config(WalkConfig raw) {
  if (raw.k < 2) throw ConfigError("dimension k must be >= 2");
  if (raw.alphas.empty()) throw ConfigError("the set of step distributions must be non-empty");
  const std::size_t q = raw.alphas.size();
  for (std::size_t t = 0; t < q; ++t) {
    auto& alpha = raw.alphas[t];
    if (alpha.dimension() != raw.k)
      throw ConfigError("alpha " + std::to_string(t + 1) + " has dimension " + std::to_string(alpha.dimension()) +
                        ", expected " + std::to_string(raw.k));
    double sum = 0.0;
    for (const auto& p : alpha.probs) {
      if (!(p.value > 0.0 && p.value < 1.0))
        throw ConfigError("alpha " + std::to_string(t + 1) + ": probabilities must be strictly interior to (0,1)");
      sum += p.value;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw ConfigError("alpha " + std::to_string(t + 1) + ": probabilities must sum to 1");
    if (all_exact(alpha.probs)) {
      std::optional<Ratio64> total = Ratio64{0, 1};
      for (const auto& p : alpha.probs) total = add(total, p.exact);
      if (total != Ratio64{1, 1})
        for (auto& p : alpha.probs) p.exact.reset();
    }
  }

  if (auto* iid = std::get_if<IidWeighted>(&raw.policy)) {
    if (iid->weights.empty()) {
      iid->weights.assign(q, Probability(1, static_cast<std::int64_t>(q)));
    } else {
      if (iid->weights.size() != q) throw ConfigError("policy weights must have one entry per alpha");
      double sum = 0.0;
      std::optional<Ratio64> exact_sum = Ratio64{0, 1};
      for (const auto& w : iid->weights) {
        if (!(w.value > 0.0) || !std::isfinite(w.value)) throw ConfigError("policy weights must be positive");
        sum += w.value;
        exact_sum = add(exact_sum, w.exact);
      }
      for (auto& w : iid->weights) {
        w.exact = divide(w.exact, exact_sum);
        w.value /= sum;
      }
    }
  } else if (const auto* sc = std::get_if<Scripted>(&raw.policy)) {
    if (sc->script.empty()) throw ConfigError("scripted policy needs a non-empty script");
    for (std::size_t t : sc->script)
      if (t >= q) throw ConfigError("scripted type index " + std::to_string(t + 1) + " outside [1," + std::to_string(q) + "]");
  }
  raw.validated = true;
  return raw;
}

std::optional<std::size_t> deterministic_type(const WalkConfig& cfg, std::uint64_t step_index) {
  if (step_index == 0) throw DomainError("step indices start at 1");
  if (std::holds_alternative<Cyclic>(cfg.policy)) return (step_index - 1) % cfg.num_types();
  if (const auto* sc = std::get_if<Scripted>(&cfg.policy)) return sc->script[(step_index - 1) % sc->script.size()];
  if (cfg.num_types() == 1) return 0;
  return std::nullopt;
}

AlphaVector mixture_vector(const WalkConfig& cfg) {
  if (!cfg.validated) throw ConfigError("mixture_vector needs a validated config");
  const auto* iid = std::get_if<IidWeighted>(&cfg.policy);
  if (iid == nullptr) throw ConfigError("mixture_vector is defined for iid policies only");
  AlphaVector out;
  for (std::size_t j = 0; j < cfg.k; ++j) {
    double v = 0.0;
    std::optional<Ratio64> e = Ratio64{0, 1};
    for (std::size_t t = 0; t < cfg.num_types(); ++t) {
      v += iid->weights[t].value * cfg.alphas[t].probs[j].value;
      e = add(e, mul(iid->weights[t].exact, cfg.alphas[t].probs[j].exact));
    }
    Probability p;
    p.value = v;
    p.exact = e;
    out.probs.push_back(p);
  }
  return out;
}

StepSampler::StepSampler(const WalkConfig& cfg) : k_(cfg.k), q_(cfg.num_types()), mode_(Mode::kIid) {
  if (!cfg.validated) throw ConfigError("sampler needs a validated config");
  if (const auto* iid = std::get_if<IidWeighted>(&cfg.policy)) {
    std::vector<double> w;
    for (const auto& p : iid->weights) w.push_back(p.value);
    type_cut_ = thresholds(w);
  } else if (std::holds_alternative<Cyclic>(cfg.policy)) {
    mode_ = Mode::kCyclic;
  } else {
    mode_ = Mode::kScripted;
    script_ = std::get<Scripted>(cfg.policy).script;
  }
  for (const auto& a : cfg.alphas) dir_cut_.push_back(thresholds(a.values()));
}

std::vector<std::uint64_t> StepSampler::thresholds(std::span<const double> probs) {
  std::vector<std::uint64_t> cut;
  double cum = 0.0;
  for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
    cum += probs[j];
    cut.push_back(cum >= 1.0 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(std::ldexp(cum, 64)));
  }
  return cut;
}

std::size_t StepSampler::pick(std::span<const std::uint64_t> cut, std::uint64_t u) noexcept {
  std::size_t j = 0;
  while (j < cut.size() && u >= cut[j]) ++j;
  return j;
}

std::size_t StepSampler::draw_type(std::uint64_t step_index, Rng& rng) const {
  switch (mode_) {
    case Mode::kCyclic:
      return (step_index - 1) % q_;
    case Mode::kScripted:
      return script_[(step_index - 1) % script_.size()];
    case Mode::kIid:
      break;
  }
  if (q_ == 1) return 0;
  return pick(type_cut_, rng());
}

std::size_t StepSampler::draw_direction(std::size_t type, Rng& rng) const {
  if (type >= q_) throw ConfigError("type index out of range");
  return pick(dir_cut_[type], rng());
}

Position next_step(const Position& pos, const StepSampler& sampler, Rng& rng) {
  if (pos.coords.size() != sampler.dimension()) throw DomainError("position dimension does not match the sampler");
  Position out = pos;
  const std::size_t t = sampler.draw_type(pos.step_index + 1, rng);
  ++out.coords[sampler.draw_direction(t, rng)];
  ++out.step_index;
  return out;
}

std::uint64_t gcd_vec(std::span<const std::int64_t> coords) {
  std::uint64_t g = 0;
  for (std::int64_t c : coords) {
    g = std::gcd(g, static_cast<std::uint64_t>(c < 0 ? -c : c));
    if (g == 1) return 1;
  }
  if (g == 0) throw DomainError("gcd of the zero vector is undefined (the origin is not queried)");
  return g;
}

bool is_visible(std::span<const std::int64_t> coords) { return gcd_vec(coords) == 1; }

bool is_visible(const Position& pos) { return is_visible(std::span<const std::int64_t>(pos.coords)); }

WalkGenerator::WalkGenerator(const WalkConfig& cfg, std::uint64_t stream)
    : sampler_(cfg), rng_(cfg.seed, stream), pos_(Position::origin(cfg.k)) {}

bool WalkGenerator::advance() {
  if (pos_.step_index >= kMaxSteps) throw OverflowError("walk length limit reached");
  const std::size_t t = sampler_.draw_type(pos_.step_index + 1, rng_);
  ++pos_.coords[sampler_.draw_direction(t, rng_)];
  ++pos_.step_index;
  return is_visible(std::span<const std::int64_t>(pos_.coords));
}

}  // namespace vislat
