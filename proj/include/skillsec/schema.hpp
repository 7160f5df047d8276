#pragma once

// Parsers and serializers for the on-disk skill documents. The document
// layout is described in docs/schema.md.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillsec/model.hpp"

namespace skillsec {

/// Parses a manifest document. Throws SchemaError or DuplicateIntentError.
SkillManifest parse_manifest(std::string_view text);
SkillManifest manifest_from_json(const nlohmann::json& doc);
nlohmann::json manifest_to_json(const SkillManifest& m);
std::string serialize_manifest(const SkillManifest& m);

/// Parses a backend document. When `manifest` is given, the handler table is
/// cross-checked against its intents. Throws SchemaError, UnknownIntentError
/// or UnknownPlaceholderError.
BackendSpec parse_backend_spec(std::string_view text, const SkillManifest* manifest = nullptr);
BackendSpec backend_from_json(const nlohmann::json& doc, const SkillManifest* manifest = nullptr);
nlohmann::json backend_to_json(const BackendSpec& b);
std::string serialize_backend(const BackendSpec& b);

/// Cross-validation of a backend against a frontend.
void validate_backend(const BackendSpec& backend, const SkillManifest& manifest);

/// Placeholder names appearing as {name} in a template, in order.
/// Throws UnknownPlaceholderError for anything other than the four sensitive fields.
std::vector<PermissionKind> template_placeholders(std::string_view tmpl);

/// A skill on disk: a directory holding manifest.json and backend.json.
struct SkillBundle {
    SkillManifest manifest;
    BackendSpec backend;
};

SkillManifest load_manifest_file(const std::filesystem::path& path);
/// Relative feed sources are resolved against the backend file's directory.
BackendSpec load_backend_file(const std::filesystem::path& path, const SkillManifest* manifest = nullptr);
SkillBundle load_skill_dir(const std::filesystem::path& dir);

}  // namespace skillsec
