#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace skillsec {

enum class LexiconKind : std::uint8_t { RudeWords, Pornography, Advertisement };
std::string_view lexicon_name(LexiconKind kind);

/// Phrase lists used by the certification tests and the content monitor.
/// Files: rude_words.txt, pornography.txt, advertisement.txt and an optional
/// untrusted_endpoints.txt, one entry per line, '#' comments.
struct Lexicons {
    std::vector<std::string> rude_words;
    std::vector<std::string> pornography;
    std::vector<std::string> advertisement;
    std::set<std::string> untrusted_endpoints;

    const std::vector<std::string>& phrases(LexiconKind kind) const;

    static Lexicons load(const std::filesystem::path& dir);
    static Lexicons bundled();
};

struct LexiconHit {
    LexiconKind lexicon;
    std::string phrase;
    auto operator<=>(const LexiconHit&) const = default;
};

/// Case-insensitive whole-word/phrase matches of every lexicon entry in `text`,
/// in lexicon order then phrase order.
std::vector<LexiconHit> scan_text(std::string_view text, const Lexicons& lexicons);
std::vector<std::string> scan_text(std::string_view text, const std::vector<std::string>& phrases);

}  // namespace skillsec
