#include "skillsec/schema.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "skillsec/errors.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw SchemaError(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

const json& require(const json& obj, const char* key, std::string_view where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(std::string(where) + ": missing required field '" + key + "'");
    return *it;
}

std::string get_string(const json& v, std::string_view what) {
    if (!v.is_string()) throw SchemaError(std::string(what) + " must be a string");
    return v.get<std::string>();
}

std::string require_string(const json& obj, const char* key, std::string_view where) {
    return get_string(require(obj, key, where), std::string(where) + "." + key);
}

std::string optional_string(const json& obj, const char* key, std::string_view where) {
    auto it = obj.find(key);
    return it == obj.end() ? std::string{} : get_string(*it, std::string(where) + "." + key);
}

std::int64_t optional_count(const json& obj, const char* key, std::string_view where) {
    auto it = obj.find(key);
    if (it == obj.end()) return 0;
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
        throw SchemaError(std::string(where) + "." + key + " must be a non-negative integer");
    }
    return it->get<std::int64_t>();
}

const json& require_array(const json& obj, const char* key, std::string_view where) {
    const auto& v = require(obj, key, where);
    if (!v.is_array()) throw SchemaError(std::string(where) + "." + key + " must be a list");
    return v;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    });
}

PermissionSet parse_permission_list(const json& arr, std::string_view where) {
    if (!arr.is_array()) throw SchemaError(std::string(where) + " must be a list");
    PermissionSet out;
    for (const auto& v : arr) {
        const auto name = get_string(v, where);
        auto kind = PermissionKind::from_name(name);
        if (!kind) throw SchemaError(std::string(where) + ": unknown permission '" + name + "'");
        out.insert(*kind);
    }
    return out;
}

json permission_list(const PermissionSet& perms) {
    json arr = json::array();
    for (const auto& p : perms) arr.push_back(p.name());
    return arr;
}

json parse_json(std::string_view text, std::string_view what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string(what) + ": malformed document: " + e.what());
    }
}

}  // namespace

SkillManifest manifest_from_json(const json& doc) {
    constexpr std::string_view where = "manifest";
    if (!doc.is_object()) throw SchemaError("manifest must be an object");
    reject_unknown_keys(doc,
                        {"skill_id", "display_name", "invocation_name", "categories", "description",
                         "permissions", "intents", "endpoint_ref", "developer", "rating",
                         "rating_count", "popularity", "promotional"},
                        where);

    SkillManifest m;
    m.skill_id = require_string(doc, "skill_id", where);
    if (m.skill_id.empty()) throw SchemaError("manifest.skill_id must be non-empty");
    m.display_name = require_string(doc, "display_name", where);
    m.invocation_name = text::canonical_whitespace(require_string(doc, "invocation_name", where));
    if (m.invocation_name.empty()) throw SchemaError("manifest.invocation_name must be non-empty");
    if (m.invocation_name != text::to_lower(m.invocation_name)) {
        throw SchemaError("manifest.invocation_name must be lowercase");
    }

    const auto& cats = require_array(doc, "categories", where);
    if (cats.empty() || cats.size() > 2) {
        throw SchemaError("manifest.categories must list 1 or 2 categories, got " + std::to_string(cats.size()));
    }
    for (const auto& c : cats) {
        const auto name = get_string(c, "manifest.categories[]");
        auto canon = canonical_category(name);
        if (!canon) throw SchemaError("manifest.categories: unknown category '" + name + "'");
        if (m.in_category(*canon)) throw SchemaError("manifest.categories: duplicate '" + name + "'");
        m.categories.push_back(*canon);
    }

    m.description = optional_string(doc, "description", where);
    if (auto it = doc.find("permissions"); it != doc.end()) {
        m.requested_permissions = parse_permission_list(*it, "manifest.permissions");
    }

    const auto& intents = require_array(doc, "intents", where);
    if (intents.empty()) throw SchemaError("manifest.intents must declare at least one intent");
    std::set<std::string> seen_intents;
    std::set<std::string> seen_utterances;
    for (const auto& jv : intents) {
        if (!jv.is_object()) throw SchemaError("manifest.intents[] must be objects");
        reject_unknown_keys(jv, {"name", "utterances", "slots"}, "intent");
        IntentDef intent;
        intent.name = require_string(jv, "name", "intent");
        if (!is_identifier(intent.name)) throw SchemaError("intent name '" + intent.name + "' is not an identifier");
        if (!seen_intents.insert(intent.name).second) {
            throw DuplicateIntentError("intent '" + intent.name + "' declared twice");
        }
        const auto& utts = require_array(jv, "utterances", "intent " + intent.name);
        if (utts.empty()) throw SchemaError("intent " + intent.name + ": empty utterance list");
        std::set<std::string> local;
        for (const auto& u : utts) {
            auto utterance = text::canonical_whitespace(get_string(u, "utterance"));
            if (utterance.empty()) throw SchemaError("intent " + intent.name + ": empty utterance");
            const auto folded = text::fold(utterance);
            if (!local.insert(folded).second) {
                throw SchemaError("intent " + intent.name + ": duplicate utterance '" + utterance + "'");
            }
            if (!seen_utterances.insert(folded).second) {
                throw SchemaError("utterance '" + utterance + "' is claimed by more than one intent");
            }
            intent.utterances.push_back(std::move(utterance));
        }
        if (auto it = jv.find("slots"); it != jv.end()) {
            if (!it->is_array()) throw SchemaError("intent " + intent.name + ": slots must be a list");
            for (const auto& s : *it) {
                reject_unknown_keys(s, {"name", "type"}, "slot");
                Slot slot;
                slot.name = require_string(s, "name", "slot");
                const auto type = require_string(s, "type", "slot");
                auto t = slot_type_from_name(type);
                if (!t) throw SchemaError("slot " + slot.name + ": unsupported type '" + type + "'");
                slot.type = *t;
                intent.slots.push_back(std::move(slot));
            }
        }
        m.intents.push_back(std::move(intent));
    }

    m.endpoint_ref = require_string(doc, "endpoint_ref", where);
    if (m.endpoint_ref.empty()) throw SchemaError("manifest.endpoint_ref must be non-empty");
    m.developer = optional_string(doc, "developer", where);
    if (auto it = doc.find("rating"); it != doc.end()) {
        if (!it->is_number()) throw SchemaError("manifest.rating must be a number");
        m.rating = it->get<double>();
        if (!(m.rating >= 0.0 && m.rating <= 5.0)) throw SchemaError("manifest.rating must lie in [0, 5]");
    }
    m.rating_count = optional_count(doc, "rating_count", where);
    m.popularity = optional_count(doc, "popularity", where);
    if (auto it = doc.find("promotional"); it != doc.end()) {
        if (!it->is_boolean()) throw SchemaError("manifest.promotional must be a boolean");
        m.promotional = it->get<bool>();
    }
    return m;
}

SkillManifest parse_manifest(std::string_view text) {
    return manifest_from_json(parse_json(text, "manifest"));
}

json manifest_to_json(const SkillManifest& m) {
    json intents = json::array();
    for (const auto& i : m.intents) {
        json ji{{"name", i.name}, {"utterances", i.utterances}};
        if (!i.slots.empty()) {
            json slots = json::array();
            for (const auto& s : i.slots) slots.push_back({{"name", s.name}, {"type", slot_type_name(s.type)}});
            ji["slots"] = std::move(slots);
        }
        intents.push_back(std::move(ji));
    }
    json doc{{"skill_id", m.skill_id},
             {"display_name", m.display_name},
             {"invocation_name", m.invocation_name},
             {"categories", m.categories},
             {"description", m.description},
             {"permissions", permission_list(m.requested_permissions)},
             {"intents", std::move(intents)},
             {"endpoint_ref", m.endpoint_ref},
             {"developer", m.developer},
             {"rating", m.rating},
             {"rating_count", m.rating_count},
             {"popularity", m.popularity}};
    if (m.promotional) doc["promotional"] = true;
    return doc;
}

std::string serialize_manifest(const SkillManifest& m) { return manifest_to_json(m).dump(2) + "\n"; }

std::vector<PermissionKind> template_placeholders(std::string_view tmpl) {
    std::vector<PermissionKind> out;
    size_t pos = 0;
    while ((pos = tmpl.find('{', pos)) != std::string_view::npos) {
        const auto close = tmpl.find('}', pos);
        if (close == std::string_view::npos) {
            throw UnknownPlaceholderError("unterminated placeholder in template '" + std::string(tmpl) + "'");
        }
        const auto name = tmpl.substr(pos + 1, close - pos - 1);
        auto kind = PermissionKind::from_placeholder(name);
        if (!kind) throw UnknownPlaceholderError("unknown placeholder {" + std::string(name) + "}");
        out.push_back(*kind);
        pos = close + 1;
    }
    return out;
}

void validate_backend(const BackendSpec& backend, const SkillManifest& manifest) {
    if (backend.endpoint_ref != manifest.endpoint_ref) {
        throw SchemaError("backend endpoint '" + backend.endpoint_ref + "' does not match manifest endpoint '" +
                          manifest.endpoint_ref + "'");
    }
    for (const auto& rule : backend.handlers) {
        if (!manifest.find_intent(rule.intent_name)) {
            throw UnknownIntentError("handler for undeclared intent '" + rule.intent_name + "'");
        }
    }
    for (const auto& intent : manifest.intents) {
        if (!backend.find_rule(intent.name)) {
            throw SchemaError("intent '" + intent.name + "' has no handler in backend '" + backend.endpoint_ref + "'");
        }
    }
}

BackendSpec backend_from_json(const json& doc, const SkillManifest* manifest) {
    constexpr std::string_view where = "backend";
    if (!doc.is_object()) throw SchemaError("backend must be an object");
    reject_unknown_keys(doc, {"endpoint_ref", "version", "welcome_message", "handlers", "feed"}, where);

    BackendSpec b;
    b.endpoint_ref = require_string(doc, "endpoint_ref", where);
    const auto& version = require(doc, "version", where);
    if (!version.is_number_integer() || version.get<std::int64_t>() < 1) {
        throw SchemaError("backend.version must be a positive integer");
    }
    b.version = version.get<std::int64_t>();
    b.welcome_message = optional_string(doc, "welcome_message", where);
    template_placeholders(b.welcome_message);

    if (auto it = doc.find("feed"); it != doc.end()) {
        reject_unknown_keys(*it, {"source", "format"}, "backend.feed");
        FeedLink link;
        link.source = require_string(*it, "source", "backend.feed");
        const auto fmt = require_string(*it, "format", "backend.feed");
        auto f = feed_format_from_name(fmt);
        if (!f) throw SchemaError("backend.feed.format must be rss or json, got '" + fmt + "'");
        link.format = *f;
        b.feed = std::move(link);
    }

    std::set<std::string> seen;
    for (const auto& jr : require_array(doc, "handlers", where)) {
        if (!jr.is_object()) throw SchemaError("backend.handlers[] must be objects");
        reject_unknown_keys(jr, {"intent", "response", "question", "exfiltrate", "gate", "gated_response", "play_feed"},
                            "handler");
        HandlerRule r;
        r.intent_name = require_string(jr, "intent", "handler");
        if (!seen.insert(r.intent_name).second) {
            throw SchemaError("intent '" + r.intent_name + "' has more than one handler");
        }
        r.response_template = require_string(jr, "response", "handler " + r.intent_name);
        template_placeholders(r.response_template);
        if (auto it = jr.find("question"); it != jr.end()) {
            r.question = text::canonical_whitespace(get_string(*it, "handler.question"));
            template_placeholders(*r.question);
        }
        if (auto it = jr.find("exfiltrate"); it != jr.end()) {
            r.exfiltrate = parse_permission_list(*it, "handler.exfiltrate");
            for (const auto& p : r.exfiltrate) {
                if (!p.sensitive()) throw SchemaError("handler.exfiltrate may only name sensitive fields");
            }
        }
        if (auto it = jr.find("gate"); it != jr.end()) {
            r.gate = get_string(*it, "handler.gate");
            if (!is_identifier(*r.gate)) throw SchemaError("gate '" + *r.gate + "' is not an identifier");
        }
        if (auto it = jr.find("gated_response"); it != jr.end()) {
            r.gated_response = get_string(*it, "handler.gated_response");
            template_placeholders(*r.gated_response);
        }
        if (r.gate && !r.gated_response) {
            throw SchemaError("handler " + r.intent_name + ": gate requires gated_response");
        }
        if (auto it = jr.find("play_feed"); it != jr.end()) {
            if (!it->is_boolean()) throw SchemaError("handler.play_feed must be a boolean");
            r.play_feed = it->get<bool>();
        }
        if (r.play_feed && !b.feed) throw SchemaError("handler " + r.intent_name + ": play_feed without a feed link");
        b.handlers.push_back(std::move(r));
    }
    if (manifest) validate_backend(b, *manifest);
    return b;
}

BackendSpec parse_backend_spec(std::string_view text, const SkillManifest* manifest) {
    return backend_from_json(parse_json(text, "backend"), manifest);
}

json backend_to_json(const BackendSpec& b) {
    json handlers = json::array();
    for (const auto& r : b.handlers) {
        json jr{{"intent", r.intent_name}, {"response", r.response_template}};
        if (r.question) jr["question"] = *r.question;
        if (!r.exfiltrate.empty()) jr["exfiltrate"] = permission_list(r.exfiltrate);
        if (r.gate) jr["gate"] = *r.gate;
        if (r.gated_response) jr["gated_response"] = *r.gated_response;
        if (r.play_feed) jr["play_feed"] = true;
        handlers.push_back(std::move(jr));
    }
    json doc{{"endpoint_ref", b.endpoint_ref},
             {"version", b.version},
             {"welcome_message", b.welcome_message},
             {"handlers", std::move(handlers)}};
    if (b.feed) doc["feed"] = {{"source", b.feed->source}, {"format", feed_format_name(b.feed->format)}};
    return doc;
}

std::string serialize_backend(const BackendSpec& b) { return backend_to_json(b).dump(2) + "\n"; }

SkillManifest load_manifest_file(const std::filesystem::path& path) {
    try {
        return parse_manifest(text::read_file(path.string()));
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

BackendSpec load_backend_file(const std::filesystem::path& path, const SkillManifest* manifest) {
    auto spec = parse_backend_spec(text::read_file(path.string()), manifest);
    if (spec.feed && spec.feed->source.find("://") == std::string::npos) {
        std::filesystem::path src(spec.feed->source);
        if (src.is_relative()) spec.feed->source = (path.parent_path() / src).lexically_normal().string();
    }
    return spec;
}

SkillBundle load_skill_dir(const std::filesystem::path& dir) {
    SkillBundle bundle;
    bundle.manifest = load_manifest_file(dir / "manifest.json");
    bundle.backend = load_backend_file(dir / "backend.json", &bundle.manifest);
    return bundle;
}

}  // namespace skillsec
