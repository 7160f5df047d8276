#include "skillsec/config.hpp"

#include <cstdlib>

#include "skillsec/errors.hpp"
#include "skillsec/text.hpp"

namespace skillsec {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path bundled_data_dir() { return fs::path(SKILLSEC_DATA_DIR); }

Config config_from_json(const json& doc, const fs::path& base_dir, Config c) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    auto path_of = [&](const json& v) {
        fs::path p(v.get<std::string>());
        return p.is_absolute() ? p : (base_dir / p).lexically_normal();
    };
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "platform") {
                auto p = PlatformPreset::from_name(v.get<std::string>());
                if (!p) throw ConfigError("unknown platform '" + v.get<std::string>() + "'");
                c.platform = *p;
            } else if (key == "lexicon_dir") {
                c.lexicon_dir = path_of(v);
            } else if (key == "blacklist") {
                c.blacklist_path = path_of(v);
            } else if (key == "similarity_dir") {
                c.similarity_dir = path_of(v);
            } else if (key == "provider") {
                const auto s = v.get<std::string>();
                if (s == "lexical") c.provider = ProviderKind::Lexical;
                else if (s == "embedding") c.provider = ProviderKind::Embedding;
                else throw ConfigError("unknown provider '" + s + "'");
            } else if (key == "lexical_threshold") {
                c.lexical_threshold = v.get<double>();
            } else if (key == "embedding_threshold") {
                c.embedding_threshold = v.get<double>();
            } else if (key == "sidecar_command") {
                c.sidecar_command = v.get<std::vector<std::string>>();
            } else if (key == "alert_level") {
                c.alert_level = v.get<double>();
            } else if (key == "snapshot_store") {
                c.snapshot_store = path_of(v);
            } else if (key == "report_format") {
                const auto s = v.get<std::string>();
                if (s == "text") c.report_format = ReportFormat::Text;
                else if (s == "json") c.report_format = ReportFormat::Structured;
                else throw ConfigError("unknown report_format '" + s + "'");
            } else if (key == "fetch") {
                c.fetch.timeout_ms = v.value("timeout_ms", c.fetch.timeout_ms);
                c.fetch.retries = v.value("retries", c.fetch.retries);
                c.fetch.size_cap_bytes = v.value("size_cap_bytes", c.fetch.size_cap_bytes);
            } else if (key == "profile_seed") {
                c.profile_seed = v.get<std::uint64_t>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

Config load_config_file(const fs::path& path) {
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
    json doc;
    try {
        doc = json::parse(text::read_file(path.string()));
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    Config base;
    const auto data = bundled_data_dir();
    base.lexicon_dir = data / "lexicons";
    base.blacklist_path = data / "blacklist.txt";
    base.similarity_dir = data / "similarity";
    base.snapshot_store = fs::current_path() / "snapshots";
    return config_from_json(doc, fs::absolute(path).parent_path(), base);
}

Config load_config(const std::optional<fs::path>& explicit_path) {
    fs::path path;
    if (explicit_path) {
        path = *explicit_path;
    } else if (const char* env = std::getenv("SKILLSEC_CONFIG"); env && *env) {
        path = env;
    } else {
        path = bundled_data_dir() / "config.json";
    }
    auto c = load_config_file(path);
    c.validate();
    return c;
}

void Config::validate() const {
    auto dir = [](const fs::path& p, const char* what) {
        if (!fs::is_directory(p)) throw ConfigError(std::string(what) + " is not a directory: " + p.string());
    };
    dir(lexicon_dir, "lexicon_dir");
    dir(similarity_dir, "similarity_dir");
    if (!fs::is_regular_file(blacklist_path)) throw ConfigError("blacklist not found: " + blacklist_path.string());
    auto unit = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0,1]");
    };
    unit(lexical_threshold, "lexical_threshold");
    unit(embedding_threshold, "embedding_threshold");
    unit(alert_level, "alert_level");
    if (provider == ProviderKind::Embedding && sidecar_command.empty()) {
        throw ConfigError("provider 'embedding' needs sidecar_command");
    }
    if (snapshot_store.empty()) throw ConfigError("snapshot_store is empty");
    if (fs::exists(snapshot_store) && !fs::is_directory(snapshot_store)) {
        throw ConfigError("snapshot_store is not a directory: " + snapshot_store.string());
    }
    if (fetch.timeout_ms <= 0 || fetch.retries < 0 || fetch.size_cap_bytes == 0) {
        throw ConfigError("fetch settings must be positive");
    }
}

}  // namespace skillsec
