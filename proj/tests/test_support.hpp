#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "skillsec/text.hpp"

namespace skillsec::testing {

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(SKILLSEC_FIXTURE_DIR) / rel; }
inline std::filesystem::path golden(const std::string& rel) { return std::filesystem::path(SKILLSEC_GOLDEN_DIR) / rel; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("skillsec-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

}  // namespace skillsec::testing
