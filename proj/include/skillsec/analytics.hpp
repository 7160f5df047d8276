#pragma once

// Market survey statistics over a skill corpus.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "skillsec/model.hpp"

namespace skillsec {

struct TableRow {
    std::string label;
    std::size_t count = 0;
    bool operator==(const TableRow&) const = default;
};

struct PercentRow {
    std::string label;
    std::size_t count = 0;
    double percent = 0.0;
};

struct CorpusStats {
    std::size_t skills = 0;
    /// Rows "4", "3", "2", "1 (Phone number)", "1 (Full name)", "1 (Email)",
    /// "1 (Address)" and "0"; counts sum to `skills`.
    std::vector<TableRow> permission_table;
    std::size_t requesting_sensitive = 0;
    /// Number of skills sharing a name -> number of invocation names.
    std::map<std::size_t, std::size_t> duplication_histogram;
    /// Rows "1", "2 - 9", "10 - 49", "50 - 99", "100 - 499", "500 - 999", ">= 1000".
    std::vector<TableRow> developer_table;
    std::vector<TableRow> top_developers;  // three largest, by count then name
    /// Rows "< 50", "50 - 99", "100 - 149", "150 - 199", ">= 200" (words).
    std::vector<PercentRow> description_length_distribution;

    std::size_t duplicated_names() const;       // names shared by two or more skills
    std::size_t developers_with_several() const;  // developers with two or more skills
};

/// Throws EmptyCorpusError.
CorpusStats compute_stats(std::span<const SkillManifest> corpus);

/// Collapses skills equal on (display name, invocation name, developer,
/// sorted utterances), keeping the first occurrence.
std::vector<SkillManifest> dedup_corpus(std::span<const SkillManifest> raw);

struct WatchEntry {
    std::string developer;
    std::size_t developer_skill_count = 0;
    std::string skill_id;
};

/// Other skills published by the developers of the seed skills, largest
/// developers first, corpus order within a developer. Throws UnknownSkillError.
std::vector<WatchEntry> flag_multi_skill_developers(std::span<const SkillManifest> corpus,
                                                    const std::vector<std::string>& seed_skill_ids);

std::size_t description_word_count(const std::string& description);

}  // namespace skillsec
