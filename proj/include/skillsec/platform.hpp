#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "skillsec/model.hpp"

namespace skillsec {

enum class Platform : std::uint8_t { Alexa, Google, Baidu };

struct PlatformPreset {
    Platform platform = Platform::Alexa;
    int sensitive_permission_count = 4;
    bool checkbox_default_granted = true;

    /// Sensitive kinds a skill can obtain through permissions on this platform.
    PermissionSet supported_sensitive() const;
    std::string_view name() const;

    static PlatformPreset alexa() { return {Platform::Alexa, 4, true}; }
    static PlatformPreset google() { return {Platform::Google, 2, false}; }
    static PlatformPreset baidu() { return {Platform::Baidu, 1, true}; }
    static std::optional<PlatformPreset> from_name(std::string_view name);
};

}  // namespace skillsec
