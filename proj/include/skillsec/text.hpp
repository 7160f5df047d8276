#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace skillsec::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Trim and collapse every run of whitespace into a single space. Case is kept.
std::string canonical_whitespace(std::string_view s);

/// Case-folded, punctuation-stripped, whitespace-collapsed form used for
/// utterance matching. Apostrophes and hyphens are dropped without splitting
/// the word ("what's" -> "whats", "e-mail" -> "email").
std::string fold(std::string_view s);

/// Lowercase word tokens of `fold(s)`.
std::vector<std::string> words(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// True if the token sequence of `phrase` occurs contiguously in the token
/// sequence of `haystack` (case-insensitive, whole words only).
bool contains_phrase(std::string_view haystack, std::string_view phrase);

/// Sentences of `s` that end in '?', trimmed, in order of appearance.
std::vector<std::string> question_sentences(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);

/// Lines of a text file body with '#' comments and blank lines removed.
std::vector<std::string> list_lines(std::string_view body);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view body);

}  // namespace skillsec::text
