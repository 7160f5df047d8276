#include "skillsec/ecosystem.hpp"

#include <algorithm>
#include <tuple>

#include "skillsec/errors.hpp"
#include "skillsec/feed.hpp"
#include "skillsec/schema.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

std::string permission_reminder(const PermissionSet& missing) {
    std::vector<std::string> names;
    for (const auto& p : missing) names.push_back(p.display());
    std::string list;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i > 0) list += (i + 1 == names.size()) ? " and " : ", ";
        list += names[i];
    }
    return "Please grant the " + list + (names.size() > 1 ? " permissions" : " permission") +
           " in your companion app.";
}

std::optional<EnableChannel> enable_channel_from_name(std::string_view name) {
    const auto n = text::to_lower(name);
    if (n == "website") return EnableChannel::Website;
    if (n == "app") return EnableChannel::App;
    if (n == "voice") return EnableChannel::Voice;
    return std::nullopt;
}

EnableResult enable_skill(UserProfile& profile, const SkillManifest& skill, EnableChannel channel,
                          const std::optional<PermissionSet>& override_grants, const PlatformPreset& preset,
                          std::int64_t timestamp) {
    PermissionSet grants;
    if (override_grants) {
        grants = *override_grants;
    } else if (channel != EnableChannel::Voice && preset.checkbox_default_granted) {
        grants = skill.requested_permissions;
    }
    // Sensitive kinds the platform does not expose can never be granted.
    const auto supported = preset.supported_sensitive();
    std::erase_if(grants, [&](const PermissionKind& p) { return p.sensitive() && !supported.contains(p); });

    profile.grants[skill.skill_id] = grants;
    profile.enabled[skill.skill_id] = timestamp;
    return EnableResult{std::move(grants), timestamp};
}

std::string_view resolution_rule_name(ResolutionRule r) {
    switch (r) {
        case ResolutionRule::OnlyCandidate: return "only-candidate";
        case ResolutionRule::MostPopular: return "most-popular";
        case ResolutionRule::OnlyEnabled: return "only-enabled";
        case ResolutionRule::HighestRating: return "highest-rating";
        case ResolutionRule::EarliestEnabled: return "earliest-enabled";
        case ResolutionRule::SmallestId: return "smallest-id";
    }
    return "";
}

InvocationResolution resolve_invocation_detailed(const UserProfile& profile, std::string_view spoken_name,
                                                 std::span<const SkillManifest> corpus) {
    const auto wanted = text::to_lower(text::canonical_whitespace(spoken_name));
    std::vector<const SkillManifest*> candidates;
    for (const auto& m : corpus) {
        if (m.invocation_name == wanted) candidates.push_back(&m);
    }
    if (candidates.empty()) throw NoSuchInvocationError("no skill is invoked by '" + wanted + "'");

    InvocationResolution out;
    out.candidates = candidates.size();
    if (candidates.size() == 1) {
        out.skill_id = candidates.front()->skill_id;
        return out;
    }

    std::vector<const SkillManifest*> enabled;
    for (const auto* m : candidates) {
        if (profile.enabled.contains(m->skill_id)) enabled.push_back(m);
    }

    if (enabled.empty()) {
        auto key = [](const SkillManifest* m) { return std::make_tuple(-m->popularity, m->skill_id); };
        std::sort(candidates.begin(), candidates.end(), [&](auto* a, auto* b) { return key(a) < key(b); });
        out.skill_id = candidates[0]->skill_id;
        out.rule = candidates[0]->popularity == candidates[1]->popularity ? ResolutionRule::SmallestId
                                                                          : ResolutionRule::MostPopular;
        return out;
    }
    if (enabled.size() == 1) {
        out.skill_id = enabled.front()->skill_id;
        out.rule = ResolutionRule::OnlyEnabled;
        return out;
    }

    auto key = [&](const SkillManifest* m) {
        return std::make_tuple(-m->rating, profile.enabled.at(m->skill_id), m->skill_id);
    };
    std::sort(enabled.begin(), enabled.end(), [&](auto* a, auto* b) { return key(a) < key(b); });
    const auto first = key(enabled[0]);
    const auto second = key(enabled[1]);
    out.skill_id = enabled[0]->skill_id;
    if (std::get<0>(first) != std::get<0>(second)) {
        out.rule = ResolutionRule::HighestRating;
    } else if (std::get<1>(first) != std::get<1>(second)) {
        out.rule = ResolutionRule::EarliestEnabled;
    } else {
        out.rule = ResolutionRule::SmallestId;
    }
    return out;
}

std::string resolve_invocation(const UserProfile& profile, std::string_view spoken_name,
                               std::span<const SkillManifest> corpus) {
    return resolve_invocation_detailed(profile, spoken_name, corpus).skill_id;
}

std::uint64_t ExfiltrationLedger::append(ExfiltrationRecord record) {
    std::lock_guard lock(mutex_);
    record.sequence = records_.size();
    records_.push_back(std::move(record));
    return records_.back().sequence;
}

std::vector<ExfiltrationRecord> ExfiltrationLedger::records() const {
    std::lock_guard lock(mutex_);
    return records_;
}

std::size_t ExfiltrationLedger::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

FeedSnapshot load_feed_file(const FeedLink& link) {
    return parse_feed(text::read_file(link.source), link.format, link.source);
}

Ecosystem::Ecosystem(PlatformPreset preset) : preset_(preset), feed_loader_(load_feed_file) {}

void Ecosystem::publish(SkillManifest manifest, BackendSpec backend) {
    validate_backend(backend, manifest);
    std::unique_lock lock(mutex_);
    auto& lineage = lineages_[backend.endpoint_ref];
    if (lineage.empty()) lineage.push_back(std::make_shared<const BackendSpec>(std::move(backend)));
    auto id = manifest.skill_id;
    manifests_[id] = std::make_shared<const SkillManifest>(std::move(manifest));
}

void Ecosystem::add_profile(UserProfile profile) {
    std::unique_lock lock(mutex_);
    auto id = profile.user_id;
    profiles_[id] = std::move(profile);
}

UserProfile Ecosystem::profile(const std::string& user_id) const {
    std::shared_lock lock(mutex_);
    auto it = profiles_.find(user_id);
    if (it == profiles_.end()) throw SessionError("unknown user '" + user_id + "'");
    return it->second;
}

SkillManifest Ecosystem::manifest(const std::string& skill_id) const {
    std::shared_lock lock(mutex_);
    auto it = manifests_.find(skill_id);
    if (it == manifests_.end()) throw UnknownSkillError("skill '" + skill_id + "' is not published");
    return *it->second;
}

std::vector<SkillManifest> Ecosystem::corpus() const {
    std::shared_lock lock(mutex_);
    std::vector<SkillManifest> out;
    out.reserve(manifests_.size());
    for (const auto& [_, m] : manifests_) out.push_back(*m);
    return out;
}

std::int64_t Ecosystem::current_version(const std::string& endpoint_ref) const {
    std::shared_lock lock(mutex_);
    auto it = lineages_.find(endpoint_ref);
    if (it == lineages_.end()) throw UnknownSkillError("no backend for endpoint '" + endpoint_ref + "'");
    return it->second.back()->version;
}

EnableResult Ecosystem::enable_skill(const std::string& user_id, const std::string& skill_id,
                                     EnableChannel channel, const std::optional<PermissionSet>& override_grants) {
    std::unique_lock lock(mutex_);
    auto m = manifests_.find(skill_id);
    if (m == manifests_.end()) throw UnknownSkillError("skill '" + skill_id + "' is not published");
    auto p = profiles_.find(user_id);
    if (p == profiles_.end()) throw SessionError("unknown user '" + user_id + "'");
    return skillsec::enable_skill(p->second, *m->second, channel, override_grants, preset_, ++clock_);
}

std::string Ecosystem::resolve_invocation(const std::string& user_id, std::string_view spoken_name) const {
    const auto skills = corpus();
    return skillsec::resolve_invocation(profile(user_id), spoken_name, skills);
}

InvocationResolution Ecosystem::resolve_invocation_detailed(const std::string& user_id,
                                                            std::string_view spoken_name) const {
    const auto skills = corpus();
    return skillsec::resolve_invocation_detailed(profile(user_id), spoken_name, skills);
}

Session Ecosystem::open_session(const std::string& user_id, const std::string& skill_id) {
    Session s;
    UserProfile prof;
    {
        std::shared_lock lock(mutex_);
        auto m = manifests_.find(skill_id);
        if (m == manifests_.end()) throw UnknownSkillError("skill '" + skill_id + "' is not published");
        auto p = profiles_.find(user_id);
        if (p == profiles_.end()) throw SessionError("unknown user '" + user_id + "'");
        s.user_id_ = user_id;
        s.manifest_ = m->second;
        s.backend_ = lineages_.at(m->second->endpoint_ref).back();
        prof = p->second;
    }
    s.welcome_ = render(s.backend_->welcome_message, prof.granted(skill_id), prof);
    return s;
}

Session Ecosystem::invoke(const std::string& user_id, std::string_view spoken_name) {
    return open_session(user_id, resolve_invocation(user_id, spoken_name));
}

std::string Ecosystem::render(std::string_view tmpl, const PermissionSet& granted,
                              const UserProfile& profile) const {
    PermissionSet missing;
    for (const auto& p : template_placeholders(tmpl)) {
        if (!granted.contains(p)) missing.insert(p);
    }
    if (!missing.empty()) return permission_reminder(missing);

    std::string out;
    size_t pos = 0;
    while (true) {
        const auto open = tmpl.find('{', pos);
        if (open == std::string_view::npos) break;
        const auto close = tmpl.find('}', open);
        out.append(tmpl.substr(pos, open - pos));
        out += profile.sentinel(*PermissionKind::from_placeholder(tmpl.substr(open + 1, close - open - 1)));
        pos = close + 1;
    }
    out.append(tmpl.substr(pos));
    return out;
}

std::string Ecosystem::handle_turn(Session& session, std::string_view utterance) {
    if (text::trim(utterance).empty()) throw SessionError("empty utterance");
    if (!session.backend_) throw SessionError("session is not open");

    UserProfile prof;
    std::map<std::string, bool> gates;
    FeedLoader loader;
    {
        std::shared_lock lock(mutex_);
        auto p = profiles_.find(session.user_id_);
        if (p == profiles_.end()) throw SessionError("unknown user '" + session.user_id_ + "'");
        prof = p->second;
        gates = gates_;
        loader = feed_loader_;
    }
    const auto granted = prof.granted(session.skill_id());
    const auto& manifest = *session.manifest_;
    const auto& backend = *session.backend_;

    TurnRecord turn;
    turn.utterance = std::string(utterance);
    const auto folded = text::fold(utterance);
    const IntentDef* intent = nullptr;
    for (const auto& i : manifest.intents) {
        if (std::any_of(i.utterances.begin(), i.utterances.end(),
                        [&](const std::string& u) { return text::fold(u) == folded; })) {
            intent = &i;
            break;
        }
    }
    if (!intent) {
        turn.response = std::string(kFallbackResponse);
        session.turn_log_.push_back(turn);
        return turn.response;
    }
    turn.intent = intent->name;
    const HandlerRule& rule = *backend.find_rule(intent->name);

    bool open_branch = true;
    if (rule.gate) {
        auto it = gates.find(*rule.gate);
        open_branch = it != gates.end() && it->second;
        session.gates_seen_[*rule.gate] |= open_branch;
    }

    std::optional<std::string> question;
    if (!open_branch) {
        turn.response = render(*rule.gated_response, granted, prof);
    } else {
        bool needs_grant = false;
        for (const auto& p : template_placeholders(rule.response_template)) needs_grant |= !granted.contains(p);
        turn.response = render(rule.response_template, granted, prof);
        if (!needs_grant) {
            if (rule.play_feed && backend.feed) {
                try {
                    const auto snap = loader(*backend.feed);
                    for (const auto& raw : snap.items) {
                        const auto item = canonical_item(raw);
                        turn.response += " " + item.title;
                        if (!item.body.empty()) turn.response += ". " + item.body;
                    }
                } catch (const Error&) {
                    turn.response = std::string(kFeedUnavailableResponse);
                }
            }
            if (rule.question) {
                question = render(*rule.question, granted, prof);
                turn.response += (turn.response.empty() ? "" : " ") + *question;
            }
            if (!rule.exfiltrate.empty()) {
                ExfiltrationRecord rec;
                rec.user_id = session.user_id_;
                rec.skill_id = manifest.skill_id;
                rec.backend_version = backend.version;
                rec.turn_index = session.turn_log_.size();
                for (const auto& f : rule.exfiltrate) {
                    if (!granted.contains(f)) continue;
                    rec.fields_sent.insert(f);
                    rec.values_sent.push_back(prof.sentinel(f));
                }
                ledger_.append(std::move(rec));
            }
        }
    }
    session.pending_question_ = question;
    session.turn_log_.push_back(turn);
    return turn.response;
}

SwapResult Ecosystem::swap_backend(const std::string& endpoint_ref, BackendSpec new_spec,
                                   const std::optional<SkillManifest>& new_manifest) {
    std::unique_lock lock(mutex_);
    auto lin = lineages_.find(endpoint_ref);
    if (lin == lineages_.end()) throw UnknownSkillError("no backend for endpoint '" + endpoint_ref + "'");
    if (new_spec.endpoint_ref != endpoint_ref) {
        throw VersionError("backend for '" + new_spec.endpoint_ref + "' submitted to endpoint '" + endpoint_ref + "'");
    }
    const auto current = lin->second.back()->version;
    if (new_spec.version != current + 1) {
        throw VersionError("expected version " + std::to_string(current + 1) + ", got " +
                           std::to_string(new_spec.version));
    }

    std::shared_ptr<const SkillManifest> old_manifest;
    for (const auto& [_, m] : manifests_) {
        if (m->endpoint_ref == endpoint_ref && (!new_manifest || m->skill_id == new_manifest->skill_id)) {
            old_manifest = m;
            break;
        }
    }
    if (!old_manifest) throw UnknownSkillError("no published skill links endpoint '" + endpoint_ref + "'");

    SwapResult result;
    const SkillManifest& frontend = new_manifest ? *new_manifest : *old_manifest;
    validate_backend(new_spec, frontend);
    result.revetting_required = new_manifest && frontend_differs(*old_manifest, *new_manifest);
    if (new_manifest) manifests_[new_manifest->skill_id] = std::make_shared<const SkillManifest>(*new_manifest);
    result.version = new_spec.version;
    lin->second.push_back(std::make_shared<const BackendSpec>(std::move(new_spec)));
    result.accepted = true;
    return result;
}

void Ecosystem::set_gate(const std::string& gate, bool value) {
    std::unique_lock lock(mutex_);
    gates_[gate] = value;
}

bool Ecosystem::gate(const std::string& gate) const {
    std::shared_lock lock(mutex_);
    auto it = gates_.find(gate);
    return it != gates_.end() && it->second;
}

void Ecosystem::set_feed_loader(FeedLoader loader) {
    std::unique_lock lock(mutex_);
    feed_loader_ = std::move(loader);
}

bool frontend_differs(const SkillManifest& a, const SkillManifest& b) {
    return std::tie(a.display_name, a.invocation_name, a.categories, a.description, a.requested_permissions,
                    a.intents, a.endpoint_ref) !=
           std::tie(b.display_name, b.invocation_name, b.categories, b.description, b.requested_permissions,
                    b.intents, b.endpoint_ref);
}

}  // namespace skillsec
