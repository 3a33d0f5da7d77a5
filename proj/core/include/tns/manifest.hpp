/// @file manifest.hpp
/// @brief Run manifest: a JSON record of what was run and what came out.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tns {

struct RunManifest {
  std::string command;                   ///< tool subcommand
  std::string version;                   ///< library version string
  std::string config_text;               ///< canonical configuration
  std::uint64_t config_hash = 0;         ///< FNV-1a of config_text
  std::uint64_t seed = 0;
  int exit_code = 0;
  std::vector<std::pair<std::string, std::string>> results;  ///< ordered key/value
  std::vector<std::string> artifacts;    ///< files written by the run
};

/// Serialize to pretty-printed JSON.
std::string manifest_to_json(const RunManifest& m);

/// Write the JSON form to a file.
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace tns
