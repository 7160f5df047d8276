#pragma once

// Human-readable and JSON renderings of every result the tools emit.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillsec/analytics.hpp"
#include "skillsec/content_monitor.hpp"
#include "skillsec/question_guard.hpp"
#include "skillsec/vetting.hpp"

namespace skillsec {

nlohmann::json to_json(const VettingReport& r);
std::string to_text(const VettingReport& r);

nlohmann::json to_json(const std::vector<QuestionFinding>& findings, std::string_view provider, double threshold);
std::string to_text(const std::vector<QuestionFinding>& findings, std::string_view provider, double threshold);

/// `sections` picks any of "table4", "fig7", "table6", "table8" (empty: all).
nlohmann::json to_json(const CorpusStats& s, const std::vector<std::string>& sections = {});
std::string to_text(const CorpusStats& s, const std::vector<std::string>& sections = {});

nlohmann::json to_json(const ContentDiff& d);
nlohmann::json to_json(const PolicyFinding& f);
nlohmann::json to_json(const PollResult& r);
std::string to_text(const PollResult& r);
nlohmann::json to_json(const MonitorReport& r);
std::string to_text(const MonitorReport& r);

}  // namespace skillsec
