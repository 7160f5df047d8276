#include "skillsec/report.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace skillsec {

using nlohmann::json;

namespace {

json permission_names(const PermissionSet& s) {
    json a = json::array();
    for (const auto& p : s) a.push_back(p.name());
    return a;
}

json outcome(const TestOutcome& t) { return {{"pass", t.pass}, {"findings", t.findings}}; }

std::string pass_fail(bool pass) { return pass ? "PASS" : "FAIL"; }

bool wanted(const std::vector<std::string>& sections, const char* name) {
    return sections.empty() || std::find(sections.begin(), sections.end(), name) != sections.end();
}

json rows_json(const std::vector<TableRow>& rows) {
    json a = json::array();
    for (const auto& r : rows) a.push_back({{"label", r.label}, {"count", r.count}});
    return a;
}

}  // namespace

json to_json(const VettingReport& r) {
    const auto& pc = r.permission_classification;
    json evidence = json::array();
    for (const auto& e : pc.evidence) {
        evidence.push_back({{"granted", permission_names(e.granted)}, {"transcript_sha256", e.transcript_digest}});
    }
    return {{"skill_id", r.skill_id},
            {"backend_version", r.backend_version},
            {"publishable", r.publishable()},
            {"functional", outcome(r.functional)},
            {"voice_interface", outcome(r.voice_interface)},
            {"policy", outcome(r.policy)},
            {"security", outcome(r.security)},
            {"permission_classification",
             {{"verdict", verdict_name(pc.verdict)},
              {"unused_granted_fields", permission_names(pc.unused_granted_fields)},
              {"unfired_gates", pc.unfired_gates},
              {"evidence", evidence}}},
            {"violations_matrix", r.violations_matrix}};
}

std::string to_text(const VettingReport& r) {
    std::string out = fmt::format("skill {} backend v{}: {}\n", r.skill_id, r.backend_version,
                                  r.publishable() ? "publishable" : "rejected");
    auto section = [&](const char* name, const TestOutcome& t) {
        out += fmt::format("  {:<16} {}\n", name, pass_fail(t.pass));
        for (const auto& f : t.findings) out += fmt::format("    - {}\n", f);
    };
    section("functional", r.functional);
    section("voice interface", r.voice_interface);
    section("policy", r.policy);
    section("security", r.security);
    const auto& pc = r.permission_classification;
    out += fmt::format("  permissions      {}\n", verdict_name(pc.verdict));
    if (!pc.unused_granted_fields.empty()) out += fmt::format("    unused fields: {}\n", to_string(pc.unused_granted_fields));
    if (!pc.unfired_gates.empty()) out += fmt::format("    unfired gates: {}\n", fmt::join(pc.unfired_gates, ", "));
    for (const auto& e : pc.evidence) {
        out += fmt::format("    granted {:<48} {}\n", to_string(e.granted), e.transcript_digest.substr(0, 16));
    }
    return out;
}

json to_json(const std::vector<QuestionFinding>& findings, std::string_view provider, double threshold) {
    json a = json::array();
    for (const auto& f : findings) {
        json j = {{"question", f.question},
                  {"change_kind", change_kind_name(f.change_kind)},
                  {"classification", classification_name(f.classification)}};
        if (f.score) {
            j["score"] = *f.score;
            j["best_match"] = f.best_match;
        }
        a.push_back(std::move(j));
    }
    return {{"provider", provider}, {"threshold", threshold}, {"findings", a}};
}

std::string to_text(const std::vector<QuestionFinding>& findings, std::string_view provider, double threshold) {
    std::string out = fmt::format("provider {} threshold {:.2f}\n", provider, threshold);
    for (const auto& f : findings) {
        if (f.score) {
            out += fmt::format("  {:<9} {:<9} {:.3f}  \"{}\" ~ \"{}\"\n", change_kind_name(f.change_kind),
                               classification_name(f.classification), *f.score, f.question, f.best_match);
        } else {
            out += fmt::format("  {:<9} {:<9} -      \"{}\"\n", change_kind_name(f.change_kind), "unscored", f.question);
        }
    }
    if (findings.empty()) out += "  no questions\n";
    return out;
}

json to_json(const CorpusStats& s, const std::vector<std::string>& sections) {
    json j = {{"skills", s.skills}};
    if (wanted(sections, "table4")) {
        j["table4"] = {{"rows", rows_json(s.permission_table)}, {"total_requesting", s.requesting_sensitive}};
    }
    if (wanted(sections, "fig7")) {
        json h = json::object();
        for (const auto& [share, n] : s.duplication_histogram) h[std::to_string(share)] = n;
        j["fig7"] = {{"histogram", h}, {"duplicated_names", s.duplicated_names()}};
    }
    if (wanted(sections, "table6")) {
        j["table6"] = {{"rows", rows_json(s.developer_table)},
                       {"developers_with_several", s.developers_with_several()},
                       {"top", rows_json(s.top_developers)}};
    }
    if (wanted(sections, "table8")) {
        json a = json::array();
        for (const auto& r : s.description_length_distribution) {
            a.push_back({{"label", r.label}, {"count", r.count}, {"percent", r.percent}});
        }
        j["table8"] = {{"rows", a}};
    }
    return j;
}

std::string to_text(const CorpusStats& s, const std::vector<std::string>& sections) {
    std::string out = fmt::format("skills: {}\n", s.skills);
    if (wanted(sections, "table4")) {
        out += "\nSensitive permissions requested\n";
        for (const auto& r : s.permission_table) out += fmt::format("  {:<18} {:>7}\n", r.label, r.count);
        out += fmt::format("  {:<18} {:>7}\n", "Total (>= 1)", s.requesting_sensitive);
    }
    if (wanted(sections, "fig7")) {
        out += "\nSkills sharing an invocation name\n";
        for (const auto& [share, n] : s.duplication_histogram) {
            if (share >= 2) out += fmt::format("  {:>4} skills  {:>5} names\n", share, n);
        }
        out += fmt::format("  shared names: {}\n", s.duplicated_names());
    }
    if (wanted(sections, "table6")) {
        out += "\nSkills per developer\n";
        for (const auto& r : s.developer_table) out += fmt::format("  {:<10} {:>7}\n", r.label, r.count);
        out += fmt::format("  developers with two or more skills: {}\n", s.developers_with_several());
        for (const auto& r : s.top_developers) out += fmt::format("  top: {} ({})\n", r.label, r.count);
    }
    if (wanted(sections, "table8")) {
        out += "\nDescription length (words)\n";
        for (const auto& r : s.description_length_distribution) {
            out += fmt::format("  {:<10} {:>7} {:>6.1f}%\n", r.label, r.count, r.percent);
        }
    }
    return out;
}

json to_json(const ContentDiff& d) {
    auto items = [](const std::vector<FeedItem>& v) {
        json a = json::array();
        for (const auto& i : v) a.push_back({{"title", i.title}, {"body", i.body}});
        return a;
    };
    json changed = json::array();
    for (const auto& [o, n] : d.changed_items) changed.push_back({{"title", o.title}, {"old", o.body}, {"new", n.body}});
    return {{"old_digest", d.old_digest}, {"new_digest", d.new_digest},      {"drift", d.drift},
            {"added", items(d.added_items)}, {"removed", items(d.removed_items)}, {"changed", changed}};
}

json to_json(const PolicyFinding& f) {
    return {{"item", f.item_index},
            {"lexicon", lexicon_name(f.lexicon)},
            {"phrase", f.matched_phrase},
            {"severity", severity_name(f.severity)}};
}

json to_json(const PollResult& r) {
    json j = {{"skill_id", r.skill_id}, {"alert", r.alert}};
    if (!r.error.empty()) j["error"] = r.error;
    if (r.snapshot) {
        j["taken_at"] = r.snapshot->taken_at;
        j["digest"] = r.snapshot->digest;
        j["items"] = r.snapshot->items.size();
    }
    if (r.diff) j["diff"] = to_json(*r.diff);
    json f = json::array();
    for (const auto& x : r.findings) f.push_back(to_json(x));
    j["findings"] = f;
    return j;
}

std::string to_text(const PollResult& r) {
    if (!r.error.empty()) return fmt::format("{}: error: {}\n", r.skill_id, r.error);
    std::string out = fmt::format("{}: {} items digest {}", r.skill_id, r.snapshot->items.size(),
                                  r.snapshot->digest.substr(0, 16));
    if (r.diff) out += fmt::format(" drift {:.3f}", r.diff->drift);
    out += r.alert ? " ALERT\n" : "\n";
    for (const auto& f : r.findings) {
        out += fmt::format("  item {} {} {}: {}\n", f.item_index, severity_name(f.severity), lexicon_name(f.lexicon),
                           f.matched_phrase);
    }
    return out;
}

json to_json(const MonitorReport& r) {
    json snaps = json::array();
    for (const auto& s : r.snapshots) {
        json j = {{"taken_at", s.taken_at}, {"digest", s.digest}, {"items", s.items}};
        if (s.drift) j["drift"] = *s.drift;
        snaps.push_back(std::move(j));
    }
    json f = json::array();
    for (const auto& x : r.latest_findings) f.push_back(to_json(x));
    return {{"skill_id", r.entry.skill_id},
            {"source", r.entry.source},
            {"format", feed_format_name(r.entry.format)},
            {"snapshots", snaps},
            {"latest_findings", f},
            {"alert", r.alert}};
}

std::string to_text(const MonitorReport& r) {
    std::string out = fmt::format("{} <- {} ({})\n", r.entry.skill_id, r.entry.source, feed_format_name(r.entry.format));
    for (const auto& s : r.snapshots) {
        out += fmt::format("  t={} items {} digest {}", s.taken_at, s.items, s.digest.substr(0, 16));
        if (s.drift) out += fmt::format(" drift {:.3f}", *s.drift);
        out += "\n";
    }
    for (const auto& f : r.latest_findings) {
        out += fmt::format("  latest item {} {} {}: {}\n", f.item_index, severity_name(f.severity),
                           lexicon_name(f.lexicon), f.matched_phrase);
    }
    out += r.alert ? "  status: ALERT\n" : "  status: ok\n";
    return out;
}

}  // namespace skillsec
