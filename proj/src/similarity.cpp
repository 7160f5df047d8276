#include "skillsec/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "skillsec/errors.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

LexicalSimilarity::LexicalSimilarity(double threshold, std::set<std::string> stopwords,
                                     std::map<std::string, std::string> synonyms)
    : threshold_(threshold), stopwords_(std::move(stopwords)), synonyms_(std::move(synonyms)) {}

LexicalSimilarity LexicalSimilarity::load(const std::filesystem::path& dir, double threshold) {
    std::set<std::string> stop;
    for (const auto& line : text::list_lines(text::read_file((dir / "stopwords.txt").string()))) {
        for (auto& w : text::words(line)) stop.insert(std::move(w));
    }
    std::map<std::string, std::string> syn;
    for (const auto& line : text::list_lines(text::read_file((dir / "synonyms.txt").string()))) {
        const auto parts = text::split_whitespace(line);
        if (parts.size() != 2) throw ConfigError("synonyms.txt: expected 'word canonical', got '" + line + "'");
        syn[text::fold(parts[0])] = text::fold(parts[1]);
    }
    return LexicalSimilarity(threshold, std::move(stop), std::move(syn));
}

LexicalSimilarity LexicalSimilarity::bundled(double threshold) {
    return load(std::filesystem::path(SKILLSEC_DATA_DIR) / "similarity", threshold);
}

std::map<std::string, double> LexicalSimilarity::term_vector(std::string_view s) const {
    std::map<std::string, double> tf;
    for (auto& w : text::words(s)) {
        if (auto it = synonyms_.find(w); it != synonyms_.end()) w = it->second;
        if (stopwords_.contains(w)) continue;
        tf[w] += 1.0;
    }
    double norm = 0.0;
    for (const auto& [_, v] : tf) norm += v * v;
    norm = std::sqrt(norm);
    for (auto& [_, v] : tf) v /= norm;
    return tf;
}

double LexicalSimilarity::similarity(std::string_view a, std::string_view b) {
    if (text::trim(a).empty() || text::trim(b).empty()) throw EmptyTextError("similarity needs two non-empty texts");
    const auto va = term_vector(a);
    const auto vb = term_vector(b);
    // Texts made only of stopwords carry no content terms; fall back to
    // comparing their folded forms so identical input still scores 1.
    if (va.empty() || vb.empty()) return va.empty() && vb.empty() && text::fold(a) == text::fold(b) ? 1.0 : 0.0;

    double dot = 0.0;
    auto ia = va.begin();
    auto ib = vb.begin();
    while (ia != va.end() && ib != vb.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return std::clamp(dot, 0.0, 1.0);
}

}  // namespace skillsec
