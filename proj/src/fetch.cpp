#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "skillsec/fetch.hpp"

#include <chrono>
#include <filesystem>

#include <fmt/format.h>
#include <httplib.h>

#include "skillsec/errors.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

namespace {

std::string fetch_file(const std::string& path, const FetchOptions& options) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw FetchError(fmt::format("cannot read {}: {} (1 attempt)", path, ec.message()));
    if (size > options.size_cap_bytes) {
        throw SizeCapError(fmt::format("{} is {} bytes, cap is {}", path, size, options.size_cap_bytes));
    }
    return text::read_file(path);
}

std::string fetch_http(const std::string& url, const FetchOptions& options) {
    const auto scheme_end = url.find("://");
    const auto path_start = url.find('/', scheme_end + 3);
    const auto origin = url.substr(0, path_start);
    const auto path = path_start == std::string::npos ? std::string("/") : url.substr(path_start);

    const auto timeout = std::chrono::milliseconds(options.timeout_ms);
    const int attempts = 1 + std::max(0, options.retries);
    std::string last_error;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        httplib::Client client(origin);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_follow_location(true);

        std::string body;
        bool over_cap = false;
        auto res = client.Get(path, [&](const char* data, size_t len) {
            if (body.size() + len > options.size_cap_bytes) {
                over_cap = true;
                return false;
            }
            body.append(data, len);
            return true;
        });
        if (over_cap) throw SizeCapError(fmt::format("{} exceeds the {} byte cap", url, options.size_cap_bytes));
        if (res && res->status == 200) return body;
        last_error = res ? fmt::format("HTTP {}", res->status) : httplib::to_string(res.error());
        // Client errors will not change on retry.
        if (res && res->status >= 400 && res->status < 500) {
            throw FetchError(fmt::format("{}: {} after {} attempt(s)", url, last_error, attempt));
        }
    }
    throw FetchError(fmt::format("{}: {} after {} attempt(s)", url, last_error, attempts));
}

}  // namespace

std::string fetch_bytes(const std::string& source, const FetchOptions& options) {
    if (text::starts_with(source, "http://") || text::starts_with(source, "https://")) {
        return fetch_http(source, options);
    }
    if (text::starts_with(source, "file://")) return fetch_file(source.substr(7), options);
    return fetch_file(source, options);
}

}  // namespace skillsec
