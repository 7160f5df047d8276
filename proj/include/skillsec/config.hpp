#pragma once

// Tool configuration: a JSON document whose relative paths resolve against
// the file's own directory. Lookup order: explicit path, $SKILLSEC_CONFIG,
// the bundled data/config.json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillsec/fetch.hpp"
#include "skillsec/platform.hpp"

namespace skillsec {

enum class ReportFormat : std::uint8_t { Text, Structured };
enum class ProviderKind : std::uint8_t { Lexical, Embedding };

struct Config {
    PlatformPreset platform = PlatformPreset::alexa();
    std::filesystem::path lexicon_dir;
    std::filesystem::path blacklist_path;
    std::filesystem::path similarity_dir;  // stopwords.txt, synonyms.txt
    ProviderKind provider = ProviderKind::Lexical;
    double lexical_threshold = 0.75;
    double embedding_threshold = 0.8;
    std::vector<std::string> sidecar_command;
    double alert_level = 0.5;
    std::filesystem::path snapshot_store;
    ReportFormat report_format = ReportFormat::Text;
    FetchOptions fetch;
    std::uint64_t profile_seed = 0x5eed;

    /// Threshold of the selected provider.
    double threshold() const { return provider == ProviderKind::Lexical ? lexical_threshold : embedding_threshold; }
    /// Throws ConfigError naming the first invalid setting.
    void validate() const;
};

/// Applies the keys of `doc` over `base`; relative paths resolve against `base_dir`.
Config config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir, Config base = {});
Config load_config_file(const std::filesystem::path& path);
/// Explicit path, else $SKILLSEC_CONFIG, else the bundled config. Validated.
Config load_config(const std::optional<std::filesystem::path>& explicit_path);

std::filesystem::path bundled_data_dir();

}  // namespace skillsec
