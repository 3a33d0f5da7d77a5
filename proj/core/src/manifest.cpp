#include "tns/manifest.hpp"

#include <fstream>

#include "json.hpp"

#include "tns/common.hpp"

namespace tns {

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["version"] = m.version;
  j["config"] = m.config_text;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["exit_code"] = m.exit_code;
  nlohmann::json results = nlohmann::json::object();
  for (const auto& [key, value] : m.results) results[key] = value;
  j["results"] = results;
  j["artifacts"] = m.artifacts;
  return j.dump(2) + "\n";
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw invalid_parameter("write_manifest: cannot open '" + path + "'");
  out << manifest_to_json(m);
  if (!out) throw invalid_parameter("write_manifest: write failed for '" + path + "'");
}

}  // namespace tns
