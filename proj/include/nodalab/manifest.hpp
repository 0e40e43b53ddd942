#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace nodalab {

struct ArtifactEntry {
  /// Path relative to the output directory, '/'-separated.
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct InstanceRecord {
  std::string id;
  /// "ok", "skipped" or "failed"
  std::string status = "ok";
  /// "numerical" or "invalid_argument" for failures
  std::string error_kind;
  std::string error;
};

/// Index of one experiment run. Timestamps live only here.
struct Manifest {
  std::string kind;
  nlohmann::json config;
  std::string created;
  std::vector<InstanceRecord> instances;
  std::vector<ArtifactEntry> artifacts;

  int failures() const;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);
std::string utc_timestamp();

/// Hashes `relative` under `root` and appends it to the manifest.
void add_artifact(Manifest& manifest, const std::filesystem::path& root, const std::filesystem::path& relative);

nlohmann::json to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& j);

/// Writes root/manifest.json.
std::filesystem::path write_manifest(const Manifest& manifest, const std::filesystem::path& root);
Manifest read_manifest(const std::filesystem::path& root);

/// Files whose hash or size no longer matches, or that are missing; empty when intact.
std::vector<std::string> verify_manifest(const std::filesystem::path& root);

}  // namespace nodalab
