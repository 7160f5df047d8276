#include "skillsec/scenario.hpp"

#include <fmt/format.h>

#include "skillsec/errors.hpp"
#include "skillsec/schema.hpp"
#include "skillsec/text.hpp"
#include "skillsec/vetting.hpp"

namespace skillsec {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string str(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) throw SchemaError(std::string("scenario step needs string '") + key + "'");
    return it->get<std::string>();
}

PermissionSet permission_list(const json& arr) {
    PermissionSet out;
    for (const auto& p : arr) {
        auto k = PermissionKind::from_name(p.get<std::string>());
        if (!k) throw SchemaError("unknown permission '" + p.get<std::string>() + "' in scenario");
        out.insert(*k);
    }
    return out;
}

json record_json(const ExfiltrationRecord& r) {
    json fields = json::array();
    for (const auto& f : r.fields_sent) fields.push_back(f.name());
    return {{"sequence", r.sequence},       {"user", r.user_id},        {"skill", r.skill_id},
            {"version", r.backend_version}, {"fields", fields},         {"values", r.values_sent},
            {"turn", r.turn_index}};
}

}  // namespace

std::vector<std::string> ScenarioResult::transcript() const {
    std::vector<std::string> out;
    for (const auto& e : events) out.push_back(fmt::format("[{}] {}", e.step, e.text));
    for (const auto& r : ledger) {
        out.push_back(fmt::format("ledger #{} {} -> {} v{} turn {} sent {}", r.sequence, r.user_id, r.skill_id,
                                  r.backend_version, r.turn_index, to_string(r.fields_sent)));
    }
    return out;
}

json ScenarioResult::to_json() const {
    json ev = json::array();
    for (const auto& e : events) {
        json j = e.data;
        j["step"] = e.step;
        j["kind"] = e.kind;
        if (!e.session.empty()) j["session"] = e.session;
        ev.push_back(std::move(j));
    }
    json led = json::array();
    for (const auto& r : ledger) led.push_back(record_json(r));
    return {{"events", ev}, {"ledger", led}, {"session_versions", session_versions}};
}

ScenarioResult run_scenario(const json& doc, const fs::path& base_dir, std::uint64_t profile_seed) {
    if (!doc.is_object()) throw SchemaError("scenario must be a JSON object");
    auto resolve = [&](const std::string& p) {
        fs::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };

    PlatformPreset preset = PlatformPreset::alexa();
    if (doc.contains("platform")) {
        auto p = PlatformPreset::from_name(doc["platform"].get<std::string>());
        if (!p) throw SchemaError("unknown platform in scenario");
        preset = *p;
    }
    Ecosystem eco(preset);
    ScenarioResult res;
    const auto profiles = seeded_profiles(profile_seed);

    for (const auto& s : doc.value("skills", json::array())) {
        SkillBundle b;
        if (s.contains("dir")) {
            b = load_skill_dir(resolve(str(s, "dir")));
        } else {
            b.manifest = load_manifest_file(resolve(str(s, "manifest")));
            b.backend = load_backend_file(resolve(str(s, "backend")), &b.manifest);
        }
        ScenarioEvent e{0, "publish", "", "", {}};
        e.text = fmt::format("publish {} ({}) backend v{}", b.manifest.skill_id, b.manifest.invocation_name,
                             b.backend.version);
        e.data = {{"skill", b.manifest.skill_id}, {"version", b.backend.version}};
        eco.publish(b.manifest, b.backend);
        res.events.push_back(std::move(e));
    }
    for (const auto& u : doc.value("users", json::array())) eco.add_profile(profiles(u.get<std::string>()));
    for (const auto& [gate, v] : doc.value("gates", json::object()).items()) eco.set_gate(gate, v.get<bool>());

    std::map<std::string, Session> sessions;
    std::size_t step = 0;
    for (const auto& st : doc.value("steps", json::array())) {
        ++step;
        if (!st.is_object() || st.size() != 1) throw SchemaError(fmt::format("scenario step {} must have one key", step));
        const auto& [kind, body] = *st.items().begin();
        ScenarioEvent e{step, kind, "", "", {}};
        if (kind == "enable") {
            const auto user = str(body, "user");
            const auto skill = str(body, "skill");
            const auto ch = enable_channel_from_name(body.value("channel", "app"));
            if (!ch) throw SchemaError(fmt::format("scenario step {}: unknown channel", step));
            std::optional<PermissionSet> grants;
            if (body.contains("grants")) grants = permission_list(body["grants"]);
            const auto r = eco.enable_skill(user, skill, *ch, grants);
            e.text = fmt::format("enable {} -> {} grants {}", user, skill, to_string(r.grants));
            json g = json::array();
            for (const auto& p : r.grants) g.push_back(p.name());
            e.data = {{"user", user}, {"skill", skill}, {"grants", g}, {"enabled_at", r.enable_timestamp}};
        } else if (kind == "open") {
            const auto user = str(body, "user");
            e.session = str(body, "session");
            std::optional<InvocationResolution> how;
            if (body.contains("invocation")) how = eco.resolve_invocation_detailed(user, str(body, "invocation"));
            Session s = eco.open_session(user, how ? how->skill_id : str(body, "skill"));
            e.text = fmt::format("{} open {} -> {} v{}: {}", e.session, user, s.skill_id(), s.backend_version_in_use(),
                                 s.welcome());
            e.data = {{"user", user},
                      {"skill", s.skill_id()},
                      {"version", s.backend_version_in_use()},
                      {"welcome", s.welcome()}};
            if (how) {
                e.data["resolution"] = {{"rule", resolution_rule_name(how->rule)}, {"candidates", how->candidates}};
                if (how->rule == ResolutionRule::EarliestEnabled) {
                    e.text += " [rating tie among enabled skills, earliest enabled chosen]";
                }
            }
            res.session_versions[e.session] = s.backend_version_in_use();
            res.responses[e.session] = {s.welcome()};
            sessions.insert_or_assign(e.session, std::move(s));
        } else if (kind == "say") {
            e.session = str(body, "session");
            auto it = sessions.find(e.session);
            if (it == sessions.end()) throw SessionError("scenario uses unopened session '" + e.session + "'");
            const auto utterance = str(body, "utterance");
            const auto reply = eco.handle_turn(it->second, utterance);
            e.text = fmt::format("{} user: {} | skill: {}", e.session, utterance, reply);
            e.data = {{"utterance", utterance}, {"response", reply}};
            res.responses[e.session].push_back(reply);
        } else if (kind == "swap") {
            auto backend = load_backend_file(resolve(str(body, "backend")));
            std::optional<SkillManifest> manifest;
            if (body.contains("manifest")) manifest = load_manifest_file(resolve(str(body, "manifest")));
            const auto endpoint = body.value("endpoint", backend.endpoint_ref);
            const auto r = eco.swap_backend(endpoint, std::move(backend), manifest);
            e.text = fmt::format("swap {} -> v{} accepted={} revetting_required={}", endpoint, r.version, r.accepted,
                                 r.revetting_required);
            e.data = {{"endpoint", endpoint},
                      {"version", r.version},
                      {"accepted", r.accepted},
                      {"revetting_required", r.revetting_required}};
        } else if (kind == "gate") {
            const auto name = str(body, "name");
            const bool value = body.value("value", false);
            eco.set_gate(name, value);
            e.text = fmt::format("gate {} = {}", name, value);
            e.data = {{"name", name}, {"value", value}};
        } else {
            throw SchemaError(fmt::format("scenario step {}: unknown action '{}'", step, kind));
        }
        res.events.push_back(std::move(e));
    }
    res.ledger = eco.ledger().records();
    return res;
}

ScenarioResult run_scenario_file(const fs::path& path, std::uint64_t profile_seed) {
    json doc;
    try {
        doc = json::parse(text::read_file(path.string()));
    } catch (const json::parse_error& e) {
        throw SchemaError("scenario " + path.string() + ": " + e.what());
    }
    return run_scenario(doc, fs::absolute(path).parent_path(), profile_seed);
}

}  // namespace skillsec
