// vislat: simulate walks, print closed-form limits and run the exact oracles.
//
// Exit codes: 0 success, 1 a requested --assert check failed, 2 usage or config error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vislat/errors.hpp"
#include "vislat/json_io.hpp"
#include "vislat/mc.hpp"
#include "vislat/numtheory.hpp"
#include "vislat/oracle.hpp"

namespace {

using nlohmann::json;
using vislat::format_double;

constexpr int kExitAssert = 1;
constexpr int kExitUsage = 2;

vislat::WalkConfig uniform_config(std::size_t k) {
  vislat::WalkConfig cfg;
  cfg.k = k;
  vislat::AlphaVector a;
  for (std::size_t j = 0; j < k; ++j) a.probs.emplace_back(1, static_cast<std::int64_t>(k));
  cfg.alphas.push_back(a);
  return vislat::validate_config(cfg);
}

vislat::WalkConfig resolve_config(const std::string& path, std::size_t k) {
  return path.empty() ? uniform_config(k) : vislat::load_config(path);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + out_path);
}

std::string rational_text(const vislat::oracle::Rational& r) { return vislat::oracle::to_string(r); }

json rational_json(const vislat::oracle::Rational& r) {
  return {{"exact", rational_text(r)}, {"approx", r.get_d()}};
}

struct SimulateArgs {
  std::string config;
  std::size_t k = 2;
  std::uint64_t steps = 1000;
  std::uint64_t paths = 1;
  std::uint64_t modulus = 1;
  std::optional<std::uint64_t> seed;
  unsigned parallelism = 1;
  std::string out;
  std::string format = "csv";
  bool assert_checks = false;
  double assert_tol = 0.005;
};

int run_simulate(const SimulateArgs& args) {
  vislat::WalkConfig cfg = resolve_config(args.config, args.k);
  if (args.seed) cfg.seed = *args.seed;
  const vislat::McResult result = vislat::mc_run(cfg, {args.steps, args.paths, args.modulus, args.parallelism});
  if (args.format == "json")
    emit(args.out, vislat::mc_result_to_json(result).dump(2) + "\n");
  else
    emit(args.out, vislat::to_csv(result.summary_report()));
  if (!args.assert_checks) return 0;
  bool ok = true;
  for (const auto& c : vislat::check_against_theory(result, args.assert_tol)) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << vislat::stat_name(c.row.stat);
    if (c.row.a) std::cerr << "(" << *c.row.a << ";" << *c.row.m << ")";
    std::cerr << " mean=" << format_double(c.value) << " theory=" << format_double(c.target)
              << " tol=" << format_double(c.tolerance) << "\n";
    ok = ok && c.pass;
  }
  return ok ? 0 : kExitAssert;
}

int run_theory(int k, std::uint64_t modulus, double tol, const std::string& format) {
  const auto c = vislat::nt::theory_constants(k, tol);
  const auto z = vislat::nt::zeta(k, tol);
  std::vector<std::uint64_t> residues;
  if (modulus >= 2) {
    vislat::nt::classify_modulus(modulus);
    for (std::uint64_t a = 0; a < modulus; ++a) residues.push_back(a);
  }
  if (format == "json") {
    json j{{"k", k},           {"zeta", z.value},           {"inv_zeta", c.inv_zeta_k},
           {"euler2", c.euler2_k}, {"tolerance", c.tolerance}, {"modulus", modulus}};
    j["residues"] = json::array();
    for (auto a : residues)
      j["residues"].push_back({{"a", a},
                               {"delta", vislat::nt::delta_theory(c, a, modulus)},
                               {"gamma", vislat::nt::gamma_theory(c, a, modulus)}});
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "k,zeta,inv_zeta,euler2,tolerance\n"
            << k << ',' << format_double(z.value) << ',' << format_double(c.inv_zeta_k) << ','
            << format_double(c.euler2_k) << ',' << format_double(c.tolerance) << "\n";
  if (!residues.empty()) {
    std::cout << "m,a,delta,gamma\n";
    for (auto a : residues)
      std::cout << modulus << ',' << a << ',' << format_double(vislat::nt::delta_theory(c, a, modulus)) << ','
                << format_double(vislat::nt::gamma_theory(c, a, modulus)) << "\n";
  }
  return 0;
}

struct OracleArgs {
  std::string config;
  std::size_t k = 2;
  std::uint64_t steps = 1;
  std::uint64_t d = 1;
  std::vector<std::int64_t> g;
  std::vector<std::uint64_t> counts;
  std::string mode = "visible";
  std::string format = "text";
};

// Step counts per type for the first n steps of a config (iid collapses to its mixture).
vislat::oracle::CongruenceInstance instance_from_config(const vislat::WalkConfig& cfg, const OracleArgs& args) {
  vislat::oracle::CongruenceInstance inst;
  inst.d = args.d;
  inst.g = args.g;
  if (std::holds_alternative<vislat::IidWeighted>(cfg.policy)) {
    inst.alphas.push_back(vislat::oracle::to_rational(vislat::mixture_vector(cfg)));
    inst.counts = {args.steps};
  } else {
    for (const auto& a : cfg.alphas) inst.alphas.push_back(vislat::oracle::to_rational(a));
    inst.counts.assign(cfg.num_types(), 0);
    for (std::uint64_t i = 1; i <= args.steps; ++i) ++inst.counts[*vislat::deterministic_type(cfg, i)];
  }
  if (!args.counts.empty()) {
    if (args.counts.size() != inst.alphas.size())
      throw vislat::DomainError("--counts needs one entry per step law (" + std::to_string(inst.alphas.size()) + ")");
    inst.counts = args.counts;
  }
  return inst;
}

int run_oracle(const OracleArgs& args) {
  const vislat::WalkConfig cfg = resolve_config(args.config, args.k);
  namespace vo = vislat::oracle;
  json j{{"mode", args.mode}, {"steps", args.steps}};
  std::ostringstream text;
  if (args.mode == "dist") {
    const auto dist = vo::exact_distribution(vo::StepSchedule::from_config(cfg, args.steps));
    json entries = json::array();
    for (const auto& [pos, mass] : dist.entries) {
      entries.push_back({{"coords", pos}, {"mass", rational_json(mass)}});
      for (std::size_t j2 = 0; j2 < pos.size(); ++j2) text << (j2 ? "," : "") << pos[j2];
      text << ' ' << rational_text(mass) << "\n";
    }
    j["entries"] = entries;
  } else if (args.mode == "visible") {
    const auto p = vo::exact_visible_prob(vo::StepSchedule::from_config(cfg, args.steps));
    j["value"] = rational_json(p);
    text << rational_text(p) << "\n";
  } else if (args.mode == "pair") {
    const auto p = vo::exact_pair_prob(vo::StepSchedule::from_config(cfg, args.steps + 1));
    j["value"] = rational_json(p);
    text << rational_text(p) << "\n";
  } else if (args.mode == "L") {
    const auto inst = instance_from_config(cfg, args);
    const auto exact = vo::L_dp(inst);
    const auto approx = vo::L_charsum(inst);
    j["d"] = inst.d;
    j["counts"] = inst.counts;
    j["value"] = rational_json(exact);
    j["charsum"] = {{"re", approx.real()}, {"im", approx.imag()}};
    text << rational_text(exact) << "\n";
  } else {
    throw vislat::DomainError("unknown oracle mode '" + args.mode + "'");
  }
  std::cout << (args.format == "json" ? j.dump(2) + "\n" : text.str());
  return 0;
}

struct LemmaArgs {
  std::string id;
  std::uint64_t n = 1000;
  int l = 2;
  std::vector<std::uint64_t> grid;
  std::uint64_t d = 3;
  std::string config;
  std::size_t k = 2;
};

int run_lemma(const LemmaArgs& args) {
  namespace nt = vislat::nt;
  const std::string& id = args.id;
  if (id == "2.8" || id == "mobius-floor") {
    const double v = nt::mobius_floor_sum(args.n, args.l);
    const double main = static_cast<double>(args.n) / nt::zeta(args.l).value;
    std::cout << "n,l,sum,main_term,difference\n"
              << args.n << ',' << args.l << ',' << format_double(v) << ',' << format_double(main) << ','
              << format_double(v - main) << "\n";
    return 0;
  }
  if (id == "2.9" || id == "coprime-pairs") {
    const double v = nt::coprime_pair_sum(args.n, args.l);
    const double main = static_cast<double>(args.n) * nt::euler_product_two(args.l).value;
    std::cout << "n,l,sum,main_term,difference\n"
              << args.n << ',' << args.l << ',' << format_double(v) << ',' << format_double(main) << ','
              << format_double(v - main) << "\n";
    return 0;
  }
  if (id == "2.4" || id == "charsum") {
    const vislat::WalkConfig cfg = resolve_config(args.config, args.k);
    std::vector<vislat::oracle::RationalVector> alphas;
    if (std::holds_alternative<vislat::IidWeighted>(cfg.policy))
      alphas.push_back(vislat::oracle::to_rational(vislat::mixture_vector(cfg)));
    else
      for (const auto& a : cfg.alphas) alphas.push_back(vislat::oracle::to_rational(a));
    const std::vector<std::uint64_t> grid = args.grid.empty() ? std::vector<std::uint64_t>{8, 16, 32} : args.grid;
    const auto table = vislat::oracle::congruence_decay(args.d, alphas, grid);
    std::cout << "n,d,max_deviation,max_deviation_exact,sums_to_one\n";
    for (const auto& p : table.points)
      std::cout << p.n << ',' << args.d << ',' << format_double(p.max_deviation_approx) << ','
                << vislat::oracle::to_string(p.max_deviation) << ',' << (p.sums_to_one ? "true" : "false") << "\n";
    std::cout << "slope," << (table.slope ? format_double(*table.slope) : std::string("NA")) << "\n";
    return 0;
  }
  throw vislat::DomainError("unknown lemma id '" + id + "' (expected charsum, mobius-floor, coprime-pairs or 2.4, 2.8, 2.9)");
}

int run_sweep(const std::string& config, std::size_t k, const std::vector<std::uint64_t>& grid, std::uint64_t paths,
              std::uint64_t modulus, unsigned parallelism, std::optional<std::uint64_t> seed) {
  vislat::WalkConfig cfg = resolve_config(config, k);
  if (seed) cfg.seed = *seed;
  const auto sweep = vislat::convergence_sweep(cfg, grid, paths, modulus, parallelism);
  std::cout << "n,mean,abs_error,stddev\n";
  for (const auto& p : sweep.points)
    std::cout << p.n << ',' << format_double(p.mean) << ',' << format_double(p.abs_error) << ','
              << format_double(p.stddev) << "\n";
  std::cout << "stddev_slope," << (sweep.stddev_slope ? format_double(*sweep.stddev_slope) : std::string("NA"))
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visible lattice points on random walks: simulation, closed forms and exact oracles"};
  app.require_subcommand(1);

  SimulateArgs sim;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run; writes the CSV/JSON report");
  simulate->add_option("config", sim.config, "walk config JSON (default: uniform walk in dimension --k)");
  simulate->add_option("--k", sim.k, "dimension when no config is given")->check(CLI::Range(2, 64));
  simulate->add_option("--steps", sim.steps, "steps n per path")->check(CLI::PositiveNumber);
  simulate->add_option("--paths", sim.paths, "independent paths")->check(CLI::PositiveNumber);
  simulate->add_option("--mod", sim.modulus, "modulus m for residue rows (1 = none)")->check(CLI::PositiveNumber);
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "override the config seed");
  simulate->add_option("--parallelism", sim.parallelism, "worker threads (0 = all cores)");
  simulate->add_option("--out", sim.out, "output file (default stdout)");
  simulate->add_option("--format", sim.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  simulate->add_flag("--assert", sim.assert_checks, "exit 1 unless every theory row is within --assert-tol");
  simulate->add_option("--assert-tol", sim.assert_tol, "absolute tolerance for --assert");

  int th_k = 2;
  std::uint64_t th_mod = 1;
  double th_tol = 1e-12;
  std::string th_format = "csv";
  auto* theory = app.add_subcommand("theory", "closed-form limits for dimension k and modulus m");
  theory->add_option("--k", th_k, "dimension")->check(CLI::Range(2, 1024));
  theory->add_option("--mod", th_mod, "modulus (2^r or an odd prime; 1 = none)");
  theory->add_option("--tol", th_tol, "absolute error bound for zeta and the Euler product");
  theory->add_option("--format", th_format)->check(CLI::IsMember({"csv", "json"}));

  OracleArgs orc;
  std::string g_text;
  std::string counts_text;
  auto* oracle = app.add_subcommand("oracle", "exact small-n laws in rational arithmetic");
  oracle->add_option("--config", orc.config, "walk config JSON (default: uniform walk in dimension --k)");
  oracle->add_option("--k", orc.k)->check(CLI::Range(2, 16));
  oracle->add_option("--steps", orc.steps, "step n")->check(CLI::PositiveNumber);
  oracle->add_option("--d", orc.d, "modulus for --mode L")->check(CLI::PositiveNumber);
  oracle->add_option("--g", g_text, "comma-separated residues g_1..g_{k-1} for --mode L");
  oracle->add_option("--counts", counts_text, "comma-separated steps per type for --mode L");
  oracle->add_option("--mode", orc.mode)->check(CLI::IsMember({"dist", "visible", "pair", "L"}));
  oracle->add_option("--format", orc.format)->check(CLI::IsMember({"text", "json"}));

  LemmaArgs lem;
  std::string grid_text;
  auto* lemma = app.add_subcommand("lemma", "arithmetic identities: 2.4 (charsum), 2.8 (mobius-floor), 2.9 (coprime-pairs)");
  lemma->add_option("--id", lem.id)->required();
  lemma->add_option("--n", lem.n)->check(CLI::PositiveNumber);
  lemma->add_option("--l", lem.l)->check(CLI::Range(2, 64));
  lemma->add_option("--grid", grid_text, "comma-separated n grid for charsum");
  lemma->add_option("--d", lem.d)->check(CLI::PositiveNumber);
  lemma->add_option("--config", lem.config);
  lemma->add_option("--k", lem.k)->check(CLI::Range(2, 16));

  std::string sw_config;
  std::size_t sw_k = 2;
  std::string sw_grid = "10000,100000,1000000";
  std::uint64_t sw_paths = 16;
  std::uint64_t sw_mod = 1;
  unsigned sw_par = 1;
  std::uint64_t sw_seed = 0;
  auto* sweep = app.add_subcommand("sweep", "error and spread of the visible proportion over an n grid");
  sweep->add_option("config", sw_config);
  sweep->add_option("--k", sw_k)->check(CLI::Range(2, 64));
  sweep->add_option("--grid", sw_grid);
  sweep->add_option("--paths", sw_paths)->check(CLI::PositiveNumber);
  sweep->add_option("--mod", sw_mod)->check(CLI::PositiveNumber);
  sweep->add_option("--parallelism", sw_par);
  auto* sw_seed_opt = sweep->add_option("--seed", sw_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  auto split = [](const std::string& s, auto& out) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(static_cast<std::remove_reference_t<decltype(out[0])>>(std::stoll(item)));
  };

  try {
    if (*simulate) {
      if (*seed_opt) sim.seed = sim_seed;
      return run_simulate(sim);
    }
    if (*theory) return run_theory(th_k, th_mod, th_tol, th_format);
    if (*oracle) {
      split(g_text, orc.g);
      split(counts_text, orc.counts);
      return run_oracle(orc);
    }
    if (*lemma) {
      split(grid_text, lem.grid);
      return run_lemma(lem);
    }
    if (*sweep) {
      std::vector<std::uint64_t> grid;
      split(sw_grid, grid);
      return run_sweep(sw_config, sw_k, grid, sw_paths, sw_mod, sw_par,
                       *sw_seed_opt ? std::optional<std::uint64_t>(sw_seed) : std::nullopt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
