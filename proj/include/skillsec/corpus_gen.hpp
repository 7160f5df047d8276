#pragma once

// Synthetic skill-store corpus built from published survey distributions,
// with planted permission verdicts, duplicate listings and shared names.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillsec/analytics.hpp"
#include "skillsec/model.hpp"
#include "skillsec/vetting.hpp"

namespace skillsec {

/// One row of the sensitive-permission table: which kinds a skill in the row
/// requests (`kinds` empty means "any `width` of the four") and how many of
/// the row's skills carry each planted verdict. Skills not otherwise labeled
/// are Compliant.
struct PermissionRowPlan {
    std::string label;
    std::size_t width = 0;
    PermissionSet kinds;
    std::size_t total = 0;
    std::size_t over_privileged = 0;
    std::size_t potentially_over_privileged = 0;
    std::size_t legitimate_over_used = 0;
};

struct DeveloperBucketPlan {
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::size_t developers = 0;
};

struct CorpusPlan {
    std::uint64_t seed = 42;
    std::size_t unique_skills = 33744;
    std::size_t raw_skills = 37350;
    std::vector<PermissionRowPlan> permission_rows;
    /// share count -> number of invocation names shared by that many skills
    std::map<std::size_t, std::size_t> shared_names;
    std::vector<std::pair<std::string, std::size_t>> named_shared_names;
    std::vector<DeveloperBucketPlan> developer_buckets;
    std::vector<std::pair<std::string, std::size_t>> named_developers;
    std::vector<double> description_percentages;  // "< 50" ... ">= 200"
    std::vector<std::pair<std::string, double>> category_weights;

    static CorpusPlan survey();
    /// Plan with every field of `survey()` overridable from a JSON object.
    static CorpusPlan from_json(const nlohmann::json& doc);
};

struct PlantedTables {
    std::vector<TableRow> permission_table;
    std::map<std::size_t, std::size_t> duplication_histogram;
    std::vector<TableRow> developer_table;
    std::vector<TableRow> top_developers;
    std::vector<std::size_t> description_counts;
    std::size_t raw_skills = 0;
    std::size_t unique_skills = 0;
    std::string watch_seed;                     // the planted over-privileged skill of the ad developer
    std::vector<std::string> watch_expected;    // that developer's other skills
};

struct GeneratedCorpus {
    std::vector<SkillManifest> raw;             // duplicates follow their originals
    std::vector<BackendSpec> backends;          // one per labeled skill
    std::map<std::string, Verdict> labels;      // labeled skill_id -> planted verdict
    PlantedTables planted;
};

/// Throws ConfigError when the plan cannot be satisfied.
GeneratedCorpus generate_corpus(const CorpusPlan& plan);

/// Writes corpus.jsonl, backends.jsonl, labels.json and planted.json.
void write_corpus_dir(const GeneratedCorpus& corpus, const std::filesystem::path& dir);
std::vector<SkillManifest> read_corpus_jsonl(const std::filesystem::path& path);
std::vector<BackendSpec> read_backends_jsonl(const std::filesystem::path& path);
std::map<std::string, Verdict> read_labels(const std::filesystem::path& path);
nlohmann::json planted_to_json(const PlantedTables& planted);

/// Rounds each percentage to a count of `total` by largest remainder.
std::vector<std::size_t> apportion(const std::vector<double>& percentages, std::size_t total);

}  // namespace skillsec
