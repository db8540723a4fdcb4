#include "vislat/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "vislat/errors.hpp"

namespace vislat {
namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("visibility counter saturated");
  return out;
}

void add_into(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = checked_add(dst[i], src[i]);
}

double binomial_stderr(double p, std::uint64_t n) {
  return n == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace

VisAccumulator::VisAccumulator(std::uint64_t modulus, std::uint64_t first_step)
    : modulus_(modulus), lo_(first_step), visible_by_residue_(modulus, 0), pair_by_residue_(modulus, 0) {
  if (modulus == 0) throw DomainError("modulus must be >= 1");
  if (first_step == 0) throw RangeError("step indices start at 1");
}

void VisAccumulator::record(std::uint64_t i, bool visible, bool visible_prev) {
  const std::uint64_t expected = lo_ + steps_total_;
  if (i != expected)
    throw RangeError("non-contiguous record: got step " + std::to_string(i) + ", expected " + std::to_string(expected));
  if (i == 1) visible_prev = false;
  if (steps_total_ == 0) first_prev_ = visible_prev;
  steps_total_ = checked_add(steps_total_, 1);
  if (visible) {
    ++visible_total_;
    ++visible_by_residue_[i % modulus_];
    if (visible_prev) {
      ++pair_total_;
      ++pair_by_residue_[(i - 1) % modulus_];
    }
  }
  last_visible_ = visible;
}

VisAccumulator VisAccumulator::merge(VisAccumulator a, VisAccumulator b) {
  if (a.modulus_ != b.modulus_) throw RangeError("cannot merge accumulators with different moduli");
  if (a.empty() && !b.empty()) std::swap(a, b);
  if (b.empty()) {
    if (b.lo_ == a.lo_ || b.lo_ == a.lo_ + a.steps_total_) return a;
    throw RangeError("empty accumulator at step " + std::to_string(b.lo_) + " is not adjacent");
  }
  if (b.hi() + 1 == a.lo_) std::swap(a, b);
  if (a.hi() + 1 != b.lo_)
    throw RangeError("ranges [" + std::to_string(a.lo_) + "," + std::to_string(a.hi()) + "] and [" +
                     std::to_string(b.lo_) + "," + std::to_string(b.hi()) + "] are not adjacent");
  if (b.first_prev_ != a.last_visible_)
    throw RangeError("right chunk was not started from the left chunk's final visibility");
  a.steps_total_ = checked_add(a.steps_total_, b.steps_total_);
  a.visible_total_ = checked_add(a.visible_total_, b.visible_total_);
  a.pair_total_ = checked_add(a.pair_total_, b.pair_total_);
  add_into(a.visible_by_residue_, b.visible_by_residue_);
  add_into(a.pair_by_residue_, b.pair_by_residue_);
  a.last_visible_ = b.last_visible_;
  return a;
}

WindowCounts& WindowCounts::operator+=(const WindowCounts& other) {
  if (other.modulus != modulus) throw RangeError("cannot pool counts with different moduli");
  n = checked_add(n, other.n);
  visible = checked_add(visible, other.visible);
  pairs = checked_add(pairs, other.pairs);
  add_into(visible_by_residue, other.visible_by_residue);
  add_into(pair_by_residue, other.pair_by_residue);
  return *this;
}

WindowCounts window_counts(const VisAccumulator& acc) {
  if (acc.lo() != 1) throw RangeError("window counts need an accumulator starting at step 1");
  if (acc.steps_total() < 2) throw RangeError("window counts need at least n+1 = 2 recorded steps");
  WindowCounts w;
  w.modulus = acc.modulus();
  w.n = acc.steps_total() - 1;
  w.visible_by_residue = acc.visible_by_residue();
  w.pair_by_residue = acc.pair_by_residue();
  w.visible = acc.visible_total();
  w.pairs = acc.pair_total();
  if (acc.last_visible()) {
    --w.visible;
    --w.visible_by_residue[acc.hi() % acc.modulus()];
  }
  return w;
}

std::string_view stat_name(Stat s) {
  switch (s) {
    case Stat::kVisible:
      return "S";
    case Stat::kVisibleMod:
      return "S_mod";
    case Stat::kPair:
      return "R";
    case Stat::kPairMod:
      return "R_mod";
  }
  return "?";
}

Report finalize(const VisAccumulator& acc, const nt::TheoryConstants& theory, std::uint64_t seed) {
  return finalize(window_counts(acc), theory, seed);
}

Report finalize(const WindowCounts& w, const nt::TheoryConstants& theory, std::uint64_t seed) {
  if (w.n == 0) throw RangeError("cannot finalize an empty window");
  const bool residues = w.modulus >= 2;
  const bool supported = residues && nt::is_supported_modulus(w.modulus);
  Report report;
  auto push = [&](Stat stat, std::optional<std::uint64_t> a, std::uint64_t count, std::optional<double> target) {
    ReportRow row;
    row.stat = stat;
    row.k = theory.k;
    if (a) row.m = w.modulus;
    row.a = a;
    row.n = w.n;
    row.count = count;
    row.proportion = static_cast<double>(count) / static_cast<double>(w.n);
    row.theory = target;
    if (target) row.abs_error = std::fabs(row.proportion - *target);
    row.stderr_ = binomial_stderr(row.proportion, w.n);
    row.seed = seed;
    report.rows.push_back(row);
  };
  push(Stat::kVisible, std::nullopt, w.visible, theory.inv_zeta_k);
  if (residues)
    for (std::uint64_t a = 0; a < w.modulus; ++a)
      push(Stat::kVisibleMod, a, w.visible_by_residue[a],
           supported ? std::optional<double>(nt::delta_theory(theory, a, w.modulus)) : std::nullopt);
  push(Stat::kPair, std::nullopt, w.pairs, theory.euler2_k);
  if (residues)
    for (std::uint64_t a = 0; a < w.modulus; ++a)
      push(Stat::kPairMod, a, w.pair_by_residue[a],
           supported ? std::optional<double>(nt::gamma_theory(theory, a, w.modulus)) : std::nullopt);
  return report;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const Report& report) {
  os << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    os << stat_name(r.stat) << ',' << r.k << ',';
    if (r.m) os << *r.m;
    os << ',';
    if (r.a) os << *r.a;
    os << ',' << r.n << ',' << r.count << ',' << format_double(r.proportion) << ',';
    if (r.theory) os << format_double(*r.theory);
    os << ',';
    if (r.abs_error) os << format_double(*r.abs_error);
    os << ',' << format_double(r.stderr_) << ',' << r.seed << '\n';
  }
}

std::string to_csv(const Report& report) {
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

}  // namespace vislat
