#include "skillsec/vetting.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "skillsec/errors.hpp"
#include "skillsec/hash.hpp"
#include "skillsec/schema.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

namespace {

constexpr std::string_view kTestUser = "vetting-user";

std::string field_tag(const PermissionKind& k) { return "<" + k.name() + ">"; }

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    if (from.empty()) return s;
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::string transcript_digest(const std::vector<std::string>& lines) {
    std::string buf;
    for (const auto& l : lines) {
        buf += l;
        buf.push_back('\n');
    }
    return sha256_hex(buf);
}

void install(Ecosystem& eco, const SkillManifest& manifest, const BackendSpec& backend, const FeedLoader& loader,
             const std::map<std::string, bool>& gates) {
    eco.publish(manifest, backend);
    if (loader) eco.set_feed_loader(loader);
    for (const auto& [g, v] : gates) eco.set_gate(g, v);
}

}  // namespace

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Compliant: return "Compliant";
        case Verdict::OverPrivileged: return "OverPrivileged";
        case Verdict::PotentiallyOverPrivileged: return "PotentiallyOverPrivileged";
        case Verdict::LegitimateOverUsed: return "LegitimateOverUsed";
    }
    return "Compliant";
}

std::optional<Verdict> verdict_from_name(std::string_view name) {
    for (auto v : {Verdict::Compliant, Verdict::OverPrivileged, Verdict::PotentiallyOverPrivileged,
                   Verdict::LegitimateOverUsed}) {
        if (verdict_name(v) == name) return v;
    }
    return std::nullopt;
}

ProfileFactory seeded_profiles(std::uint64_t seed) {
    return [seed](const std::string& user_id) {
        // FNV-1a of the id keeps distinct users on distinct sentinels.
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : user_id) h = (h ^ c) * 0x100000001b3ULL;
        return UserProfile::with_sentinels(user_id, seed ^ h);
    };
}

std::vector<std::string> default_utterance_suite(const SkillManifest& manifest) {
    std::vector<std::string> suite;
    for (const auto& i : manifest.intents) suite.insert(suite.end(), i.utterances.begin(), i.utterances.end());
    return suite;
}

std::vector<std::string> canonical_transcript(const SkillManifest& manifest, const BackendSpec& backend,
                                              const std::vector<std::string>& suite, const PermissionSet& grants,
                                              const DifferentialOptions& options,
                                              std::map<std::string, bool>* gates_seen,
                                              PermissionSet* fields_revealed) {
    Ecosystem eco;
    install(eco, manifest, backend, options.feed_loader, options.gates);
    const auto profile = seeded_profiles(options.profile_seed)(std::string(kTestUser));
    eco.add_profile(profile);
    eco.enable_skill(profile.user_id, manifest.skill_id, EnableChannel::App, grants);

    auto session = eco.open_session(profile.user_id, manifest.skill_id);
    std::vector<std::string> lines{session.welcome()};
    for (const auto& u : suite) lines.push_back(eco.handle_turn(session, u));

    for (auto& line : lines) {
        for (const auto& k : sensitive_kinds()) {
            const auto& value = profile.sentinel(k);
            if (line.find(value) != std::string::npos) {
                if (fields_revealed) fields_revealed->insert(k);
                line = replace_all(std::move(line), value, field_tag(k));
            }
        }
    }
    if (gates_seen) {
        for (const auto& [g, fired] : session.gates_seen()) (*gates_seen)[g] |= fired;
    }
    return lines;
}

PermissionClassification differential_permission_test(const SkillManifest& manifest, const BackendSpec& backend,
                                                      const std::vector<std::string>& suite,
                                                      const DifferentialOptions& options) {
    if (suite.empty()) throw SuiteEmptyError("utterance suite is empty for skill '" + manifest.skill_id + "'");

    const auto requested = manifest.requested_sensitive();
    const std::vector<PermissionKind> kinds(requested.begin(), requested.end());
    const auto subsets = 1u << kinds.size();

    PermissionClassification out;
    std::map<std::string, bool> gates_seen;
    std::vector<std::vector<std::string>> transcripts;
    PermissionSet revealed_with_all;

    for (unsigned mask = 0; mask < subsets; ++mask) {
        PermissionSet grants;
        for (size_t i = 0; i < kinds.size(); ++i) {
            if (mask & (1u << i)) grants.insert(kinds[i]);
        }
        const bool all = mask + 1 == subsets;
        auto lines = canonical_transcript(manifest, backend, suite, grants, options, &gates_seen,
                                          all ? &revealed_with_all : nullptr);
        out.evidence.push_back({grants, transcript_digest(lines)});
        transcripts.push_back(std::move(lines));
    }

    for (const auto& [g, fired] : gates_seen) {
        if (!fired) out.unfired_gates.push_back(g);
    }

    if (kinds.empty()) {
        out.verdict = Verdict::Compliant;
        return out;
    }

    const bool all_equal = std::all_of(transcripts.begin(), transcripts.end(),
                                       [&](const auto& t) { return t == transcripts.front(); });
    if (all_equal) {
        out.verdict = out.unfired_gates.empty() ? Verdict::OverPrivileged : Verdict::PotentiallyOverPrivileged;
        return out;
    }

    for (const auto& k : kinds) {
        if (!revealed_with_all.contains(k)) out.unused_granted_fields.insert(k);
    }
    out.verdict = out.unused_granted_fields.empty() ? Verdict::Compliant : Verdict::LegitimateOverUsed;
    return out;
}

VettingReport run_certification(const SkillManifest& manifest, const BackendSpec& backend, const Lexicons& lexicons,
                                const CertificationOptions& options) {
    validate_backend(backend, manifest);

    VettingReport report;
    report.skill_id = manifest.skill_id;
    report.backend_version = backend.version;
    const auto suite = options.suite.empty() ? default_utterance_suite(manifest) : options.suite;

    // The reviewer account holds every sensitive field, so any attempt to send
    // one shows up in the ledger.
    Ecosystem eco;
    install(eco, manifest, backend, options.feed_loader, {});
    const auto profile = seeded_profiles(options.profile_seed)("reviewer");
    eco.add_profile(profile);
    PermissionSet reviewer_grants = manifest.requested_permissions;
    reviewer_grants.insert(sensitive_kinds().begin(), sensitive_kinds().end());
    eco.enable_skill(profile.user_id, manifest.skill_id, EnableChannel::App, reviewer_grants);

    auto session = eco.open_session(profile.user_id, manifest.skill_id);
    std::vector<std::string> responses{session.welcome()};
    std::map<std::string, bool> intent_ok;
    for (const auto& i : manifest.intents) intent_ok[i.name] = false;
    for (const auto& u : suite) {
        auto r = eco.handle_turn(session, u);
        const auto& turn = session.turn_log().back();
        if (turn.intent && r != kFallbackResponse && r != kFeedUnavailableResponse) intent_ok[*turn.intent] = true;
        responses.push_back(std::move(r));
    }

    // Functional
    for (const auto& i : manifest.intents) {
        if (!intent_ok[i.name]) {
            report.functional.findings.push_back("intent " + i.name + " gave no working response");
        }
    }

    // Voice interface and policy share one lexicon pass over everything spoken.
    std::set<std::string> rude, porn, ads;
    for (const auto& r : responses) {
        for (auto& hit : scan_text(r, lexicons)) {
            switch (hit.lexicon) {
                case LexiconKind::RudeWords: rude.insert(hit.phrase); break;
                case LexiconKind::Pornography: porn.insert(hit.phrase); break;
                case LexiconKind::Advertisement: ads.insert(hit.phrase); break;
            }
        }
    }
    for (const auto& w : rude) report.voice_interface.findings.push_back("rude word: " + w);
    for (const auto& w : porn) report.policy.findings.push_back("pornographic content: " + w);
    if (!manifest.promotional) {
        for (const auto& w : ads) report.policy.findings.push_back("advertisement in assistant voice: " + w);
    }
    if (manifest.in_category(kKidsCategory)) {
        const auto sens = manifest.requested_sensitive();
        if (!sens.empty()) {
            report.policy.findings.push_back("kids skill requests personal information " + to_string(sens));
        }
        for (const auto& rule : backend.handlers) {
            if (!rule.exfiltrate.empty()) {
                report.policy.findings.push_back("kids skill transmits personal information in " + rule.intent_name);
            }
        }
    }

    // Security
    for (const auto& rec : eco.ledger().records()) {
        for (const auto& f : rec.fields_sent) {
            if (!manifest.requested_permissions.contains(f)) {
                report.security.findings.push_back(
                    fmt::format("turn {} sent unrequested field {}", rec.turn_index, f.name()));
            }
        }
    }
    for (const auto& rule : backend.handlers) {
        for (const auto& f : rule.exfiltrate) {
            if (!manifest.requested_permissions.contains(f)) {
                report.security.findings.push_back("handler " + rule.intent_name + " declares transmission of " +
                                                   "unrequested field " + f.name());
            }
        }
    }
    if (lexicons.untrusted_endpoints.contains(manifest.endpoint_ref)) {
        report.security.findings.push_back("endpoint " + manifest.endpoint_ref + " is not a trusted service");
    }

    report.functional.pass = report.functional.findings.empty();
    report.voice_interface.pass = report.voice_interface.findings.empty();
    report.policy.pass = report.policy.findings.empty();
    report.security.pass = report.security.findings.empty();

    auto add = [&](const char* test, const TestOutcome& t) {
        if (!t.findings.empty()) report.violations_matrix[test] = t.findings;
    };
    add("functional", report.functional);
    add("voice_interface", report.voice_interface);
    add("policy", report.policy);
    add("security", report.security);

    DifferentialOptions diff;
    diff.profile_seed = options.profile_seed;
    diff.feed_loader = options.feed_loader;
    report.permission_classification = differential_permission_test(manifest, backend, suite, diff);
    return report;
}

bool revet_trigger(const SkillManifest& old_manifest, const SkillManifest& new_manifest) {
    if (old_manifest.skill_id != new_manifest.skill_id) {
        throw MismatchedSkillError("cannot compare '" + old_manifest.skill_id + "' with '" +
                                   new_manifest.skill_id + "'");
    }
    return frontend_differs(old_manifest, new_manifest);
}

}  // namespace skillsec
