#pragma once

// Core data types shared by every module: skill frontends (manifests),
// declarative backends, user profiles and feed snapshots.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace skillsec {

class PermissionKind {
public:
    enum class Kind : std::uint8_t { FullName, Address, PhoneNumber, Email, Other };

    PermissionKind() = default;
    explicit PermissionKind(Kind kind, std::string label = {});

    static PermissionKind full_name() { return PermissionKind(Kind::FullName); }
    static PermissionKind address() { return PermissionKind(Kind::Address); }
    static PermissionKind phone_number() { return PermissionKind(Kind::PhoneNumber); }
    static PermissionKind email() { return PermissionKind(Kind::Email); }
    static PermissionKind other(std::string label) { return PermissionKind(Kind::Other, std::move(label)); }

    /// Parses the manifest spelling: full_name, address, phone_number, email or other:<label>.
    static std::optional<PermissionKind> from_name(std::string_view name);
    /// Parses a template placeholder name: name, address, phone, email.
    static std::optional<PermissionKind> from_placeholder(std::string_view placeholder);

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    bool sensitive() const { return kind_ != Kind::Other; }

    std::string name() const;            // manifest spelling
    std::string_view placeholder() const;  // empty for Other
    std::string display() const;          // "full name", "phone number", ...

    auto operator<=>(const PermissionKind&) const = default;

private:
    Kind kind_ = Kind::Other;
    std::string label_;
};

using PermissionSet = std::set<PermissionKind>;

/// The four sensitive kinds in canonical order.
const std::array<PermissionKind, 4>& sensitive_kinds();
PermissionSet sensitive_subset(const PermissionSet& perms);
std::string to_string(const PermissionSet& perms);

/// The category names a skill may be listed under.
const std::array<std::string_view, 20>& skill_categories();
std::optional<std::string> canonical_category(std::string_view name);
inline constexpr std::string_view kKidsCategory = "Kids";

enum class SlotType : std::uint8_t { PhoneNumber, Number, FreeText };
std::optional<SlotType> slot_type_from_name(std::string_view name);
std::string_view slot_type_name(SlotType t);

struct Slot {
    std::string name;
    SlotType type = SlotType::FreeText;
    bool operator==(const Slot&) const = default;
};

struct IntentDef {
    std::string name;
    std::vector<std::string> utterances;
    std::vector<Slot> slots;
    bool operator==(const IntentDef&) const = default;
};

struct SkillManifest {
    std::string skill_id;
    std::string display_name;
    std::string invocation_name;
    std::vector<std::string> categories;
    std::string description;
    PermissionSet requested_permissions;
    std::vector<IntentDef> intents;
    std::string endpoint_ref;
    std::string developer;
    double rating = 0.0;
    std::int64_t rating_count = 0;
    std::int64_t popularity = 0;
    // Set when the skill exists to promote a product; ad phrases are then allowed.
    bool promotional = false;

    const IntentDef* find_intent(std::string_view name) const;
    PermissionSet requested_sensitive() const { return sensitive_subset(requested_permissions); }
    bool in_category(std::string_view category) const;

    bool operator==(const SkillManifest&) const = default;
};

struct HandlerRule {
    std::string intent_name;
    std::string response_template;
    std::optional<std::string> question;
    PermissionSet exfiltrate;  // empty: no exfiltration action
    std::optional<std::string> gate;
    std::optional<std::string> gated_response;
    // Flash-briefing behaviour: append the linked feed's items to the response.
    bool play_feed = false;

    bool operator==(const HandlerRule&) const = default;
};

enum class FeedFormat : std::uint8_t { RSS, JSONFeed };
std::optional<FeedFormat> feed_format_from_name(std::string_view name);
std::string_view feed_format_name(FeedFormat f);

struct FeedLink {
    std::string source;  // URL or path
    FeedFormat format = FeedFormat::RSS;
    bool operator==(const FeedLink&) const = default;
};

struct BackendSpec {
    std::string endpoint_ref;
    std::int64_t version = 1;
    std::vector<HandlerRule> handlers;
    std::string welcome_message;
    std::optional<FeedLink> feed;

    const HandlerRule* find_rule(std::string_view intent) const;
    bool operator==(const BackendSpec&) const = default;
};

struct UserProfile {
    std::string user_id;
    std::string full_name;
    std::string address;
    std::string phone_number;
    std::string email;
    std::map<std::string, PermissionSet> grants;      // skill_id -> granted kinds
    std::map<std::string, std::int64_t> enabled;      // skill_id -> enable timestamp

    /// Sentinel value of a sensitive kind; empty for Other.
    const std::string& sentinel(const PermissionKind& kind) const;
    PermissionSet granted(const std::string& skill_id) const;

    /// Profile whose personal fields are unique marker strings derived from `seed`.
    static UserProfile with_sentinels(std::string user_id, std::uint64_t seed);
};

struct FeedItem {
    std::string title;
    std::string body;
    bool operator==(const FeedItem&) const = default;
};

struct FeedSnapshot {
    std::string source;
    FeedFormat format = FeedFormat::RSS;
    std::int64_t taken_at = 0;  // seconds since epoch
    std::vector<FeedItem> items;
    std::string digest;  // hex SHA-256 over canonicalized items
};

}  // namespace skillsec
