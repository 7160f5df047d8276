#include "skillsec/model.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "skillsec/text.hpp"

namespace skillsec {

PermissionKind::PermissionKind(Kind kind, std::string label)
    : kind_(kind), label_(kind == Kind::Other ? std::move(label) : std::string{}) {}

std::optional<PermissionKind> PermissionKind::from_name(std::string_view name) {
    if (name == "full_name") return full_name();
    if (name == "address") return address();
    if (name == "phone_number") return phone_number();
    if (name == "email") return email();
    constexpr std::string_view prefix = "other:";
    if (text::starts_with(name, prefix) && name.size() > prefix.size()) {
        return other(std::string(name.substr(prefix.size())));
    }
    return std::nullopt;
}

std::optional<PermissionKind> PermissionKind::from_placeholder(std::string_view placeholder) {
    for (const auto& k : sensitive_kinds()) {
        if (k.placeholder() == placeholder) return k;
    }
    return std::nullopt;
}

std::string PermissionKind::name() const {
    switch (kind_) {
        case Kind::FullName: return "full_name";
        case Kind::Address: return "address";
        case Kind::PhoneNumber: return "phone_number";
        case Kind::Email: return "email";
        case Kind::Other: break;
    }
    return "other:" + label_;
}

std::string_view PermissionKind::placeholder() const {
    switch (kind_) {
        case Kind::FullName: return "name";
        case Kind::Address: return "address";
        case Kind::PhoneNumber: return "phone";
        case Kind::Email: return "email";
        case Kind::Other: break;
    }
    return {};
}

std::string PermissionKind::display() const {
    switch (kind_) {
        case Kind::FullName: return "full name";
        case Kind::Address: return "address";
        case Kind::PhoneNumber: return "phone number";
        case Kind::Email: return "email";
        case Kind::Other: break;
    }
    return label_;
}

const std::array<PermissionKind, 4>& sensitive_kinds() {
    static const std::array<PermissionKind, 4> kinds{
        PermissionKind::full_name(), PermissionKind::address(),
        PermissionKind::phone_number(), PermissionKind::email()};
    return kinds;
}

PermissionSet sensitive_subset(const PermissionSet& perms) {
    PermissionSet out;
    for (const auto& p : perms) {
        if (p.sensitive()) out.insert(p);
    }
    return out;
}

std::string to_string(const PermissionSet& perms) {
    std::vector<std::string> names;
    names.reserve(perms.size());
    for (const auto& p : perms) names.push_back(p.name());
    return "{" + text::join(names, ", ") + "}";
}

const std::array<std::string_view, 20>& skill_categories() {
    static const std::array<std::string_view, 20> names{
        "Weather", "Communication", "Education", "Food",      "Health",
        "Home service", "Kids",     "Life style", "News",     "Novelty",
        "Shopping", "Social",       "Sport",     "Movie",     "Smart home",
        "Game",    "Utility",       "Music",     "Business",  "Travel"};
    return names;
}

std::optional<std::string> canonical_category(std::string_view name) {
    const auto folded = text::to_lower(text::canonical_whitespace(name));
    for (auto c : skill_categories()) {
        if (text::to_lower(c) == folded) return std::string(c);
    }
    return std::nullopt;
}

std::optional<SlotType> slot_type_from_name(std::string_view name) {
    if (name == "PhoneNumber") return SlotType::PhoneNumber;
    if (name == "Number") return SlotType::Number;
    if (name == "FreeText") return SlotType::FreeText;
    return std::nullopt;
}

std::string_view slot_type_name(SlotType t) {
    switch (t) {
        case SlotType::PhoneNumber: return "PhoneNumber";
        case SlotType::Number: return "Number";
        case SlotType::FreeText: return "FreeText";
    }
    return "FreeText";
}

const IntentDef* SkillManifest::find_intent(std::string_view name) const {
    auto it = std::find_if(intents.begin(), intents.end(),
                           [&](const IntentDef& i) { return i.name == name; });
    return it == intents.end() ? nullptr : &*it;
}

bool SkillManifest::in_category(std::string_view category) const {
    return std::find(categories.begin(), categories.end(), category) != categories.end();
}

std::optional<FeedFormat> feed_format_from_name(std::string_view name) {
    const auto n = text::to_lower(name);
    if (n == "rss") return FeedFormat::RSS;
    if (n == "json" || n == "jsonfeed") return FeedFormat::JSONFeed;
    return std::nullopt;
}

std::string_view feed_format_name(FeedFormat f) {
    return f == FeedFormat::RSS ? "rss" : "json";
}

const HandlerRule* BackendSpec::find_rule(std::string_view intent) const {
    auto it = std::find_if(handlers.begin(), handlers.end(),
                           [&](const HandlerRule& r) { return r.intent_name == intent; });
    return it == handlers.end() ? nullptr : &*it;
}

const std::string& UserProfile::sentinel(const PermissionKind& kind) const {
    static const std::string none;
    switch (kind.kind()) {
        case PermissionKind::Kind::FullName: return full_name;
        case PermissionKind::Kind::Address: return address;
        case PermissionKind::Kind::PhoneNumber: return phone_number;
        case PermissionKind::Kind::Email: return email;
        case PermissionKind::Kind::Other: break;
    }
    return none;
}

PermissionSet UserProfile::granted(const std::string& skill_id) const {
    auto it = grants.find(skill_id);
    return it == grants.end() ? PermissionSet{} : it->second;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

UserProfile UserProfile::with_sentinels(std::string user_id, std::uint64_t seed) {
    UserProfile p;
    std::uint64_t state = seed;
    auto marker = [&](std::string_view field) {
        return fmt::format("ZQX{}{:012x}QXZ", field, splitmix64(state) & 0xffffffffffffULL);
    };
    p.full_name = marker("NAME");
    p.address = marker("ADDR");
    p.phone_number = marker("PHONE");
    p.email = marker("MAIL");
    p.user_id = std::move(user_id);
    return p;
}

}  // namespace skillsec
