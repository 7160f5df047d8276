#pragma once

// In-process model of the user -> device -> voice service -> skill server
// loop: enablement and permission grants, invocation-name resolution,
// per-session dialogue against a pinned backend version, and a ledger of
// everything backends sent to their developers.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillsec/model.hpp"
#include "skillsec/platform.hpp"

namespace skillsec {

/// Spoken when no intent of the skill matches the utterance.
inline constexpr std::string_view kFallbackResponse = "Sorry, I don't know how to help with that.";
/// Spoken by a flash-briefing rule whose feed cannot be loaded.
inline constexpr std::string_view kFeedUnavailableResponse = "Sorry, the briefing is unavailable right now.";

/// Fixed reminder spoken instead of a template that needs ungranted fields:
/// "Please grant the <f1> and <f2> permissions in your companion app."
std::string permission_reminder(const PermissionSet& missing);

enum class EnableChannel : std::uint8_t { Website, App, Voice };
std::optional<EnableChannel> enable_channel_from_name(std::string_view name);

struct EnableResult {
    PermissionSet grants;
    std::int64_t enable_timestamp = 0;
};

/// Enables `skill` for `profile`, recording grants and the timestamp.
EnableResult enable_skill(UserProfile& profile, const SkillManifest& skill, EnableChannel channel,
                          const std::optional<PermissionSet>& override_grants, const PlatformPreset& preset,
                          std::int64_t timestamp);

/// Picks the skill a spoken invocation name opens. Pure in (corpus, profile).
///  - nothing enabled among the candidates: highest popularity, then smallest skill_id;
///  - exactly one enabled: that one;
///  - several enabled: highest rating, then earliest enabled, then smallest skill_id.
/// Throws NoSuchInvocationError when no skill carries the name.
std::string resolve_invocation(const UserProfile& profile, std::string_view spoken_name,
                               std::span<const SkillManifest> corpus);

enum class ResolutionRule : std::uint8_t {
    OnlyCandidate,
    MostPopular,
    OnlyEnabled,
    HighestRating,
    EarliestEnabled,  // rating tie among enabled skills
    SmallestId,
};
std::string_view resolution_rule_name(ResolutionRule r);

struct InvocationResolution {
    std::string skill_id;
    ResolutionRule rule = ResolutionRule::OnlyCandidate;
    std::size_t candidates = 0;
};

/// Same choice as resolve_invocation, plus the criterion that settled it.
InvocationResolution resolve_invocation_detailed(const UserProfile& profile, std::string_view spoken_name,
                                                 std::span<const SkillManifest> corpus);

struct TurnRecord {
    std::string utterance;
    std::string response;
    std::optional<std::string> intent;  // unset when the fallback was spoken
};

struct ExfiltrationRecord {
    std::uint64_t sequence = 0;  // position in the ledger's total order
    std::string user_id;
    std::string skill_id;
    std::int64_t backend_version = 0;
    PermissionSet fields_sent;
    std::vector<std::string> values_sent;  // sentinels of fields_sent, in field order
    std::size_t turn_index = 0;
};

/// Append-only, safe for concurrent appends.
class ExfiltrationLedger {
public:
    std::uint64_t append(ExfiltrationRecord record);
    std::vector<ExfiltrationRecord> records() const;
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::vector<ExfiltrationRecord> records_;
};

class Session {
public:
    const std::string& user_id() const { return user_id_; }
    const std::string& skill_id() const { return manifest_->skill_id; }
    std::int64_t backend_version_in_use() const { return backend_->version; }
    const std::string& welcome() const { return welcome_; }
    const std::vector<TurnRecord>& turn_log() const { return turn_log_; }
    const std::optional<std::string>& pending_question() const { return pending_question_; }
    /// Gates consulted so far, mapped to whether any evaluation was true.
    const std::map<std::string, bool>& gates_seen() const { return gates_seen_; }

private:
    friend class Ecosystem;
    std::string user_id_;
    std::shared_ptr<const SkillManifest> manifest_;
    std::shared_ptr<const BackendSpec> backend_;
    std::string welcome_;
    std::vector<TurnRecord> turn_log_;
    std::optional<std::string> pending_question_;
    std::map<std::string, bool> gates_seen_;
};

struct SwapResult {
    bool accepted = false;
    bool revetting_required = false;
    std::int64_t version = 0;
};

using FeedLoader = std::function<FeedSnapshot(const FeedLink&)>;

/// Reads a feed link from disk (no network).
FeedSnapshot load_feed_file(const FeedLink& link);

class Ecosystem {
public:
    explicit Ecosystem(PlatformPreset preset = PlatformPreset::alexa());

    const PlatformPreset& preset() const { return preset_; }

    /// Publishes a skill with its first backend version. Re-publishing an
    /// existing skill_id replaces the manifest; the backend lineage is kept.
    void publish(SkillManifest manifest, BackendSpec backend);
    void add_profile(UserProfile profile);
    UserProfile profile(const std::string& user_id) const;
    SkillManifest manifest(const std::string& skill_id) const;
    std::vector<SkillManifest> corpus() const;
    std::int64_t current_version(const std::string& endpoint_ref) const;

    EnableResult enable_skill(const std::string& user_id, const std::string& skill_id, EnableChannel channel,
                              const std::optional<PermissionSet>& override_grants = std::nullopt);
    std::string resolve_invocation(const std::string& user_id, std::string_view spoken_name) const;
    InvocationResolution resolve_invocation_detailed(const std::string& user_id, std::string_view spoken_name) const;

    /// Opens a session pinned to the skill's current backend version.
    Session open_session(const std::string& user_id, const std::string& skill_id);
    /// Resolves the invocation name and opens a session on the winner.
    Session invoke(const std::string& user_id, std::string_view spoken_name);
    std::string handle_turn(Session& session, std::string_view utterance);

    /// Installs the next backend version for an endpoint. A frontend edit may
    /// accompany the swap; only then is re-vetting required.
    SwapResult swap_backend(const std::string& endpoint_ref, BackendSpec new_spec,
                            const std::optional<SkillManifest>& new_manifest = std::nullopt);

    void set_gate(const std::string& gate, bool value);
    bool gate(const std::string& gate) const;

    void set_feed_loader(FeedLoader loader);

    const ExfiltrationLedger& ledger() const { return ledger_; }

private:
    std::string render(std::string_view tmpl, const PermissionSet& granted,
                       const UserProfile& profile) const;

    PlatformPreset preset_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const SkillManifest>> manifests_;
    std::map<std::string, std::vector<std::shared_ptr<const BackendSpec>>> lineages_;
    std::map<std::string, UserProfile> profiles_;
    std::map<std::string, bool> gates_;
    std::int64_t clock_ = 0;
    FeedLoader feed_loader_;
    ExfiltrationLedger ledger_;
};

/// True iff any reviewer-visible frontend field differs: display name,
/// invocation name, categories, description, permissions, intents,
/// utterances, slots or endpoint link.
bool frontend_differs(const SkillManifest& a, const SkillManifest& b);

}  // namespace skillsec
