#pragma once

// Store-side vetting: the four certification tests, the differential
// permission tester and the frontend re-vet trigger.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "skillsec/ecosystem.hpp"
#include "skillsec/lexicon.hpp"
#include "skillsec/model.hpp"

namespace skillsec {

enum class Verdict : std::uint8_t { Compliant, OverPrivileged, PotentiallyOverPrivileged, LegitimateOverUsed };
std::string_view verdict_name(Verdict v);
std::optional<Verdict> verdict_from_name(std::string_view name);

struct SubsetEvidence {
    PermissionSet granted;
    std::string transcript_digest;  // SHA-256 of the canonical transcript
};

struct PermissionClassification {
    Verdict verdict = Verdict::Compliant;
    std::vector<SubsetEvidence> evidence;    // one entry per grant subset, mask order
    std::vector<std::string> unfired_gates;  // sorted
    PermissionSet unused_granted_fields;
};

using ProfileFactory = std::function<UserProfile(const std::string& user_id)>;
/// Factory producing sentinel profiles that depend only on (seed, user_id).
ProfileFactory seeded_profiles(std::uint64_t seed);

struct DifferentialOptions {
    std::uint64_t profile_seed = 0x5eed;
    std::map<std::string, bool> gates;  // availability flags during the test; unset = false
    FeedLoader feed_loader;             // defaults to load_feed_file
};

/// Every utterance of every intent, in declaration order.
std::vector<std::string> default_utterance_suite(const SkillManifest& manifest);

/// Replays `suite` once per subset of the requested sensitive permissions
/// (2^k runs) and compares the transcripts after replacing the test user's
/// personal values with field tags. Throws SuiteEmptyError.
PermissionClassification differential_permission_test(const SkillManifest& manifest, const BackendSpec& backend,
                                                      const std::vector<std::string>& suite,
                                                      const DifferentialOptions& options = {});

/// Transcript of one run with the given grants: the welcome line followed by
/// one response per suite utterance, personal values replaced by field tags.
std::vector<std::string> canonical_transcript(const SkillManifest& manifest, const BackendSpec& backend,
                                              const std::vector<std::string>& suite, const PermissionSet& grants,
                                              const DifferentialOptions& options,
                                              std::map<std::string, bool>* gates_seen = nullptr,
                                              PermissionSet* fields_revealed = nullptr);

struct TestOutcome {
    bool pass = true;
    std::vector<std::string> findings;
};

struct VettingReport {
    std::string skill_id;
    std::int64_t backend_version = 0;
    TestOutcome functional;
    TestOutcome voice_interface;
    TestOutcome policy;
    TestOutcome security;
    PermissionClassification permission_classification;
    // test name -> findings that violate it
    std::map<std::string, std::vector<std::string>> violations_matrix;

    bool publishable() const {
        return functional.pass && voice_interface.pass && policy.pass && security.pass;
    }
};

struct CertificationOptions {
    std::uint64_t profile_seed = 0x5eed;
    FeedLoader feed_loader;  // defaults to load_feed_file
    std::vector<std::string> suite;  // empty: default_utterance_suite
};

VettingReport run_certification(const SkillManifest& manifest, const BackendSpec& backend, const Lexicons& lexicons,
                                const CertificationOptions& options = {});

/// True iff the frontend changed in a way that must send the skill back to
/// review. Description-only edits count. Throws MismatchedSkillError.
bool revet_trigger(const SkillManifest& old_manifest, const SkillManifest& new_manifest);

}  // namespace skillsec
