#include "skillsec/lexicon.hpp"

#include "skillsec/errors.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

std::string_view lexicon_name(LexiconKind kind) {
    switch (kind) {
        case LexiconKind::RudeWords: return "rude_words";
        case LexiconKind::Pornography: return "pornography";
        case LexiconKind::Advertisement: return "advertisement";
    }
    return "";
}

const std::vector<std::string>& Lexicons::phrases(LexiconKind kind) const {
    switch (kind) {
        case LexiconKind::RudeWords: return rude_words;
        case LexiconKind::Pornography: return pornography;
        case LexiconKind::Advertisement: break;
    }
    return advertisement;
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
    auto read_list = [&](const char* file) {
        const auto path = dir / file;
        if (!std::filesystem::exists(path)) throw ConfigError("lexicon file missing: " + path.string());
        return text::list_lines(text::read_file(path.string()));
    };
    Lexicons lx;
    lx.rude_words = read_list("rude_words.txt");
    lx.pornography = read_list("pornography.txt");
    lx.advertisement = read_list("advertisement.txt");
    const auto untrusted = dir / "untrusted_endpoints.txt";
    if (std::filesystem::exists(untrusted)) {
        for (auto& e : text::list_lines(text::read_file(untrusted.string()))) lx.untrusted_endpoints.insert(e);
    }
    return lx;
}

Lexicons Lexicons::bundled() { return load(std::filesystem::path(SKILLSEC_DATA_DIR) / "lexicons"); }

std::vector<std::string> scan_text(std::string_view body, const std::vector<std::string>& phrases) {
    std::vector<std::string> hits;
    for (const auto& p : phrases) {
        if (text::contains_phrase(body, p)) hits.push_back(p);
    }
    return hits;
}

std::vector<LexiconHit> scan_text(std::string_view body, const Lexicons& lexicons) {
    std::vector<LexiconHit> hits;
    for (auto kind : {LexiconKind::RudeWords, LexiconKind::Pornography, LexiconKind::Advertisement}) {
        for (auto& p : scan_text(body, lexicons.phrases(kind))) hits.push_back({kind, std::move(p)});
    }
    return hits;
}

}  // namespace skillsec
