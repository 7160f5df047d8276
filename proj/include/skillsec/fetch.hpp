#pragma once

#include <cstddef>
#include <string>

namespace skillsec {

struct FetchOptions {
    int timeout_ms = 5000;
    int retries = 1;
    std::size_t size_cap_bytes = 1 << 20;
};

/// Reads an http(s) URL, a file:// URL or a local path. Throws FetchError
/// (message carries the attempt count) or SizeCapError.
std::string fetch_bytes(const std::string& source, const FetchOptions& options = {});

}  // namespace skillsec
