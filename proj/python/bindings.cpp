#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vislat/errors.hpp"
#include "vislat/json_io.hpp"
#include "vislat/mc.hpp"
#include "vislat/numtheory.hpp"
#include "vislat/oracle.hpp"

namespace py = pybind11;
using namespace vislat;

namespace {

// Rationals cross the boundary as "p/q" strings; the Python side wraps them in Fraction.
oracle::RationalVector parse_law(const std::vector<std::string>& law) {
  oracle::RationalVector out;
  for (const auto& s : law) {
    oracle::Rational r;
    if (r.set_str(s, 10) != 0) throw DomainError("not a rational: '" + s + "'");
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

oracle::StepSchedule parse_schedule(const std::vector<std::vector<std::string>>& steps) {
  std::vector<oracle::RationalVector> laws;
  for (const auto& s : steps) laws.push_back(parse_law(s));
  return oracle::StepSchedule(std::move(laws));
}

oracle::CongruenceInstance parse_instance(const std::vector<std::uint64_t>& counts,
                                          const std::vector<std::vector<std::string>>& alphas, std::uint64_t d,
                                          const std::vector<std::int64_t>& g) {
  oracle::CongruenceInstance inst{counts, {}, d, g};
  for (const auto& a : alphas) inst.alphas.push_back(parse_law(a));
  return inst;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of vislat";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UnsupportedModulus>(m, "UnsupportedModulus", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);

  m.attr("RNG_VERSION") = std::string(Rng::kVersion);

  m.def("zeta", [](int k, double tol) { return nt::zeta(k, tol).value; }, py::arg("k"), py::arg("tol") = 1e-12);
  m.def("euler_product_two", [](int k, double tol) { return nt::euler_product_two(k, tol).value; }, py::arg("k"),
        py::arg("tol") = 1e-12);
  m.def(
      "theory_constants",
      [](int k, double tol) {
        const auto c = nt::theory_constants(k, tol);
        py::dict d;
        d["k"] = c.k;
        d["inv_zeta"] = c.inv_zeta_k;
        d["euler2"] = c.euler2_k;
        d["tolerance"] = c.tolerance;
        return d;
      },
      py::arg("k"), py::arg("tol") = 1e-12);
  m.def("delta", py::overload_cast<int, std::uint64_t, std::uint64_t>(&nt::delta_theory), py::arg("k"), py::arg("a"),
        py::arg("m"));
  m.def("gamma", py::overload_cast<int, std::uint64_t, std::uint64_t>(&nt::gamma_theory), py::arg("k"), py::arg("a"),
        py::arg("m"));
  m.def(
      "mobius",
      [](std::uint64_t limit) {
        const auto table = nt::mobius_sieve(limit);
        return std::vector<int>(table.values().begin(), table.values().end());
      },
      py::arg("limit"));
  m.def("tau", &nt::tau, py::arg("n"));
  m.def("mobius_floor_sum", &nt::mobius_floor_sum, py::arg("n"), py::arg("l"));
  m.def("coprime_pair_sum", &nt::coprime_pair_sum, py::arg("n"), py::arg("l"));

  m.def(
      "simulate",
      [](const std::string& config_json, std::uint64_t steps, std::uint64_t paths, std::uint64_t modulus,
         unsigned parallelism) {
        const WalkConfig cfg = config_from_json(nlohmann::json::parse(config_json));
        McResult r;
        {
          py::gil_scoped_release release;
          r = mc_run(cfg, {steps, paths, modulus, parallelism});
        }
        return mc_result_to_json(r).dump();
      },
      py::arg("config_json"), py::arg("steps"), py::arg("paths"), py::arg("modulus") = 1,
      py::arg("parallelism") = 1);

  m.def(
      "exact_visible_prob",
      [](const std::vector<std::vector<std::string>>& steps) {
        return oracle::to_string(oracle::exact_visible_prob(parse_schedule(steps)));
      },
      py::arg("steps"));
  m.def(
      "exact_pair_prob",
      [](const std::vector<std::vector<std::string>>& steps) {
        return oracle::to_string(oracle::exact_pair_prob(parse_schedule(steps)));
      },
      py::arg("steps"));
  m.def(
      "L_dp",
      [](const std::vector<std::uint64_t>& counts, const std::vector<std::vector<std::string>>& alphas,
         std::uint64_t d, const std::vector<std::int64_t>& g) {
        return oracle::to_string(oracle::L_dp(parse_instance(counts, alphas, d, g)));
      },
      py::arg("counts"), py::arg("alphas"), py::arg("d"), py::arg("g") = std::vector<std::int64_t>{});
  m.def(
      "L_charsum",
      [](const std::vector<std::uint64_t>& counts, const std::vector<std::vector<std::string>>& alphas,
         std::uint64_t d, const std::vector<std::int64_t>& g) {
        return oracle::L_charsum(parse_instance(counts, alphas, d, g));
      },
      py::arg("counts"), py::arg("alphas"), py::arg("d"), py::arg("g") = std::vector<std::int64_t>{});
}
