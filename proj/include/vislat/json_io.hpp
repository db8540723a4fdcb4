#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "vislat/mc.hpp"
#include "vislat/stats.hpp"
#include "vislat/walk.hpp"

namespace vislat {

/// Reads {"k", "alphas", "policy": {"type", "weights"?, "script"?}, "seed"}.
/// Script indices are 1-based. Probabilities may be numbers or "p/q" strings.
/// Returns a validated config; throws ConfigError.
WalkConfig config_from_json(const nlohmann::json& j);
WalkConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const WalkConfig& cfg);

nlohmann::json row_to_json(const ReportRow& row);
nlohmann::json report_to_json(const Report& report);

/// {"seed", "steps", "paths", "modulus", "rng", "rows": [...], "spread": [{"mean", "stddev"}...], "per_path": [[...]...]}
nlohmann::json mc_result_to_json(const McResult& result);

}  // namespace vislat
