#include "skillsec/question_guard.hpp"

#include <algorithm>
#include <set>

#include "skillsec/errors.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

Blacklist Blacklist::load(const std::filesystem::path& path) {
    Blacklist bl;
    bl.source = path.string();
    std::set<std::string> seen;
    for (auto& line : text::list_lines(text::read_file(path.string()))) {
        auto entry = text::canonical_whitespace(line);
        if (!seen.insert(text::to_lower(entry)).second) {
            throw ConfigError("duplicate blacklist entry '" + entry + "' in " + bl.source);
        }
        bl.entries.push_back(std::move(entry));
    }
    return bl;
}

Blacklist Blacklist::bundled() { return load(std::filesystem::path(SKILLSEC_DATA_DIR) / "blacklist.txt"); }

std::string_view classification_name(Classification c) {
    return c == Classification::Sensitive ? "Sensitive" : "Benign";
}

std::string_view change_kind_name(ChangeKind c) {
    switch (c) {
        case ChangeKind::Added: return "Added";
        case ChangeKind::Changed: return "Changed";
        case ChangeKind::Unchanged: return "Unchanged";
    }
    return "";
}

std::vector<std::string> extract_questions(const BackendSpec& backend) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto add = [&](const std::string& q) {
        auto c = text::canonical_whitespace(q);
        if (!c.empty() && seen.insert(c).second) out.push_back(std::move(c));
    };
    for (const auto& rule : backend.handlers) {
        if (rule.question) add(*rule.question);
    }
    for (auto& q : text::question_sentences(backend.welcome_message)) add(q);
    for (const auto& rule : backend.handlers) {
        for (auto& q : text::question_sentences(rule.response_template)) add(q);
        if (rule.gated_response) {
            for (auto& q : text::question_sentences(*rule.gated_response)) add(q);
        }
    }
    return out;
}

BlacklistMatch score_against_blacklist(SimilarityProvider& provider, std::string_view question,
                                       const Blacklist& blacklist) {
    if (blacklist.entries.empty()) throw EmptyBlacklistError("blacklist " + blacklist.source + " has no entries");
    BlacklistMatch best{blacklist.entries.front(), -1.0};
    for (const auto& e : blacklist.entries) {
        const double s = provider.similarity(question, e);
        if (s > best.score) best = {e, s};
    }
    return best;
}

std::vector<QuestionFinding> scan_update(const BackendSpec& old_backend, const BackendSpec& new_backend,
                                         const Blacklist& blacklist, SimilarityProvider& provider) {
    if (old_backend.endpoint_ref != new_backend.endpoint_ref) {
        throw LineageError("backends belong to different endpoints: '" + old_backend.endpoint_ref + "' and '" +
                           new_backend.endpoint_ref + "'");
    }
    if (new_backend.version < old_backend.version) {
        throw LineageError("new version " + std::to_string(new_backend.version) + " precedes old version " +
                           std::to_string(old_backend.version));
    }

    const auto old_q = extract_questions(old_backend);
    const std::set<std::string> verbatim(old_q.begin(), old_q.end());
    std::set<std::string> folded;
    for (const auto& q : old_q) folded.insert(text::fold(q));

    std::vector<QuestionFinding> scored;
    std::vector<QuestionFinding> unchanged;
    for (const auto& q : extract_questions(new_backend)) {
        QuestionFinding f;
        f.question = q;
        if (verbatim.contains(q)) {
            f.change_kind = ChangeKind::Unchanged;
            unchanged.push_back(std::move(f));
            continue;
        }
        f.change_kind = folded.contains(text::fold(q)) ? ChangeKind::Changed : ChangeKind::Added;
        auto match = score_against_blacklist(provider, q, blacklist);
        f.best_match = std::move(match.entry);
        f.score = match.score;
        f.classification = classify(match.score, provider.threshold());
        scored.push_back(std::move(f));
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const QuestionFinding& a, const QuestionFinding& b) { return *a.score > *b.score; });
    scored.insert(scored.end(), std::make_move_iterator(unchanged.begin()),
                  std::make_move_iterator(unchanged.end()));
    return scored;
}

}  // namespace skillsec
