#include "vislat/json_io.hpp"

#include <fstream>

#include "vislat/errors.hpp"

namespace vislat {
namespace {

using nlohmann::json;

Probability probability_from_json(const json& v) {
  if (v.is_string()) return Probability::parse(v.get<std::string>());
  if (v.is_number()) return Probability(v.get<double>());
  throw ConfigError("probabilities must be numbers or \"p/q\" strings");
}

json probability_to_json(const Probability& p) {
  if (p.exact && p.exact->den != 1 && Probability(p.value).exact != p.exact)
    return std::to_string(p.exact->num) + "/" + std::to_string(p.exact->den);
  return p.value;
}

std::string_view policy_name(const SelectionPolicy& p) {
  if (std::holds_alternative<IidWeighted>(p)) return "iid";
  if (std::holds_alternative<Cyclic>(p)) return "cyclic";
  return "scripted";
}

}  // namespace

WalkConfig config_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    WalkConfig cfg;
    const auto k = j.at("k").get<std::int64_t>();
    if (k < 2) throw ConfigError("dimension k must be >= 2");
    cfg.k = static_cast<std::size_t>(k);
    for (const auto& row : j.at("alphas")) {
      AlphaVector a;
      for (const auto& v : row) a.probs.push_back(probability_from_json(v));
      cfg.alphas.push_back(std::move(a));
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("policy")) {
      const json& p = j.at("policy");
      const auto type = p.at("type").get<std::string>();
      if (type == "iid") {
        IidWeighted iid;
        if (p.contains("weights"))
          for (const auto& w : p.at("weights")) iid.weights.push_back(probability_from_json(w));
        cfg.policy = iid;
      } else if (type == "cyclic") {
        cfg.policy = Cyclic{};
      } else if (type == "scripted") {
        Scripted sc;
        for (const auto& t : p.at("script")) {
          const auto idx = t.get<std::int64_t>();
          if (idx < 1) throw ConfigError("script indices are 1-based");
          sc.script.push_back(static_cast<std::size_t>(idx - 1));
        }
        cfg.policy = sc;
      } else {
        throw ConfigError("unknown policy type '" + type + "'");
      }
    }
    return validate_config(std::move(cfg));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

WalkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const WalkConfig& cfg) {
  json j;
  j["k"] = cfg.k;
  j["alphas"] = json::array();
  for (const auto& a : cfg.alphas) {
    json row = json::array();
    for (const auto& p : a.probs) row.push_back(probability_to_json(p));
    j["alphas"].push_back(row);
  }
  json policy;
  policy["type"] = policy_name(cfg.policy);
  if (const auto* iid = std::get_if<IidWeighted>(&cfg.policy); iid && !iid->weights.empty()) {
    policy["weights"] = json::array();
    for (const auto& w : iid->weights) policy["weights"].push_back(probability_to_json(w));
  }
  if (const auto* sc = std::get_if<Scripted>(&cfg.policy)) {
    policy["script"] = json::array();
    for (std::size_t t : sc->script) policy["script"].push_back(t + 1);
  }
  j["policy"] = policy;
  j["seed"] = cfg.seed;
  return j;
}

json row_to_json(const ReportRow& r) {
  json j;
  j["stat"] = stat_name(r.stat);
  j["k"] = r.k;
  j["m"] = r.m ? json(*r.m) : json(nullptr);
  j["a"] = r.a ? json(*r.a) : json(nullptr);
  j["n"] = r.n;
  j["count"] = r.count;
  j["proportion"] = r.proportion;
  j["theory"] = r.theory ? json(*r.theory) : json(nullptr);
  j["abs_error"] = r.abs_error ? json(*r.abs_error) : json(nullptr);
  j["stderr"] = r.stderr_;
  j["seed"] = r.seed;
  return j;
}

json report_to_json(const Report& report) {
  json rows = json::array();
  for (const auto& r : report.rows) rows.push_back(row_to_json(r));
  return rows;
}

json mc_result_to_json(const McResult& result) {
  json j;
  j["seed"] = result.seed;
  j["steps"] = result.options.steps;
  j["paths"] = result.options.paths;
  j["modulus"] = result.options.modulus;
  j["rng"] = Rng::kVersion;
  j["rows"] = report_to_json(result.summary_report());
  json spread = json::array();
  for (const auto& s : result.summary) spread.push_back({{"mean", s.mean}, {"stddev", s.stddev}});
  j["spread"] = spread;
  json per_path = json::array();
  for (const auto& rep : result.per_path) per_path.push_back(report_to_json(rep));
  j["per_path"] = per_path;
  return j;
}

}  // namespace vislat
