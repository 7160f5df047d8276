#pragma once

// Scripted replays of the simulator: publish skills, enable them, hold
// sessions and swap backends, recording a transcript.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillsec/ecosystem.hpp"

namespace skillsec {

struct ScenarioEvent {
    std::size_t step = 0;
    std::string kind;     // publish, enable, open, say, swap, gate
    std::string session;  // for open/say
    std::string text;     // human-readable line
    nlohmann::json data;  // machine-readable detail
};

struct ScenarioResult {
    std::vector<ScenarioEvent> events;
    std::vector<ExfiltrationRecord> ledger;
    std::map<std::string, std::int64_t> session_versions;  // session -> pinned backend version
    std::map<std::string, std::vector<std::string>> responses;  // session -> welcome + responses

    std::vector<std::string> transcript() const;
    nlohmann::json to_json() const;
};

/// Replays a scenario document. Relative paths resolve against `base_dir`.
/// Throws SchemaError for malformed steps and lets simulator errors through.
ScenarioResult run_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                            std::uint64_t profile_seed = 0x5eed);
ScenarioResult run_scenario_file(const std::filesystem::path& path, std::uint64_t profile_seed = 0x5eed);

}  // namespace skillsec
