#include "skillsec/platform.hpp"

#include "skillsec/text.hpp"

namespace skillsec {

PermissionSet PlatformPreset::supported_sensitive() const {
    switch (platform) {
        case Platform::Alexa:
            return {sensitive_kinds().begin(), sensitive_kinds().end()};
        case Platform::Google:  // name and location
            return {PermissionKind::full_name(), PermissionKind::address()};
        case Platform::Baidu:  // location only
            return {PermissionKind::address()};
    }
    return {};
}

std::string_view PlatformPreset::name() const {
    switch (platform) {
        case Platform::Alexa: return "alexa";
        case Platform::Google: return "google";
        case Platform::Baidu: return "baidu";
    }
    return "alexa";
}

std::optional<PlatformPreset> PlatformPreset::from_name(std::string_view name) {
    const auto n = text::to_lower(name);
    if (n == "alexa") return alexa();
    if (n == "google") return google();
    if (n == "baidu") return baidu();
    return std::nullopt;
}

}  // namespace skillsec
