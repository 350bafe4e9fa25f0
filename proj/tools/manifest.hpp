#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace fedstrat::cli {

/// Identity of one run directory: which config produced it.
struct RunManifest {
  std::string config_path;
  std::filesystem::path output_dir;
  std::string label;
  std::string config_hash;  // git blob SHA-1 of the canonical config text
};

/// SHA-1 of "blob <size>\0<content>", hex encoded (what `git hash-object` prints).
std::string git_blob_hash(const std::string& content);

nlohmann::json to_json(const RunManifest& m);

/// Reads <dir>/manifest.json if present.
std::optional<RunManifest> read_manifest(const std::filesystem::path& dir);

}  // namespace fedstrat::cli
