#pragma once

// Screening of the questions a backend asks against a blacklist of
// privacy-probing questions, across backend versions.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skillsec/model.hpp"
#include "skillsec/similarity.hpp"

namespace skillsec {

struct Blacklist {
    std::vector<std::string> entries;
    std::string source;

    /// One entry per line, '#' comments. Duplicate entries (case-insensitive)
    /// are rejected with ConfigError.
    static Blacklist load(const std::filesystem::path& path);
    static Blacklist bundled();
};

enum class Classification : std::uint8_t { Sensitive, Benign };
enum class ChangeKind : std::uint8_t { Added, Changed, Unchanged };
std::string_view classification_name(Classification c);
std::string_view change_kind_name(ChangeKind c);

/// Inclusive: a score equal to the threshold is Sensitive.
inline Classification classify(double score, double threshold) {
    return score >= threshold ? Classification::Sensitive : Classification::Benign;
}

struct BlacklistMatch {
    std::string entry;
    double score = 0.0;
};

struct QuestionFinding {
    std::string question;
    std::string best_match;       // empty when unscored
    std::optional<double> score;  // unset for Unchanged questions
    Classification classification = Classification::Benign;
    ChangeKind change_kind = ChangeKind::Added;
};

/// Every rule's question, then the '?' sentences of the welcome message and
/// of each response template, de-duplicated in first-seen order.
std::vector<std::string> extract_questions(const BackendSpec& backend);

/// Best entry by score; ties keep the earliest entry. Throws EmptyBlacklistError.
BlacklistMatch score_against_blacklist(SimilarityProvider& provider, std::string_view question,
                                       const Blacklist& blacklist);

/// Scores questions added or reworded between two versions of one backend
/// lineage. Scored findings come first by descending score, then Unchanged
/// ones in extraction order. Throws LineageError.
std::vector<QuestionFinding> scan_update(const BackendSpec& old_backend, const BackendSpec& new_backend,
                                         const Blacklist& blacklist, SimilarityProvider& provider);

}  // namespace skillsec
