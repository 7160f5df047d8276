#pragma once

// Sentence similarity providers used by the question guard.

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace skillsec {

class SimilarityProvider {
public:
    virtual ~SimilarityProvider() = default;

    virtual std::string_view provider_id() const = 0;
    virtual double threshold() const = 0;
    /// Score in [0,1], symmetric, 1 for identical input. Throws EmptyTextError.
    virtual double similarity(std::string_view a, std::string_view b) = 0;
};

/// Cosine over L2-normalised term-frequency vectors. Tokens are case-folded,
/// stripped of punctuation, mapped through the synonym table and filtered
/// against the stopword list.
class LexicalSimilarity final : public SimilarityProvider {
public:
    LexicalSimilarity(double threshold, std::set<std::string> stopwords, std::map<std::string, std::string> synonyms);

    /// Loads stopwords.txt and synonyms.txt ("word canonical" per line) from `dir`.
    static LexicalSimilarity load(const std::filesystem::path& dir, double threshold);
    static LexicalSimilarity bundled(double threshold);

    std::string_view provider_id() const override { return "lexical"; }
    double threshold() const override { return threshold_; }
    double similarity(std::string_view a, std::string_view b) override;

    std::map<std::string, double> term_vector(std::string_view s) const;

private:
    double threshold_;
    std::set<std::string> stopwords_;
    std::map<std::string, std::string> synonyms_;
};

/// Threshold the lexical provider was calibrated to (recorded in data/config.json).
inline constexpr double kDefaultLexicalThreshold = 0.75;
inline constexpr double kDefaultEmbeddingThreshold = 0.8;

}  // namespace skillsec
