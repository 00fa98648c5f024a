// Run manifests: every file-producing CLI run records its resolved
// configuration, inputs, outputs and seed so the run can be reproduced.
#pragma once

#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "clausealign/version.hpp"

#include <json.hpp>

namespace clausealign {

struct RunManifest {
  std::string subcommand;
  std::string tool_version = kVersion;
  std::map<std::string, std::string> options;  // resolved flag values
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
};

inline std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::json obj;
  obj["subcommand"] = m.subcommand;
  obj["tool_version"] = m.tool_version;
  obj["options"] = m.options;
  obj["inputs"] = m.inputs;
  obj["outputs"] = m.outputs;
  if (m.has_seed) obj["seed"] = m.seed;
  obj["started_at"] = m.started_at;
  obj["finished_at"] = m.finished_at;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << obj.dump(2) << "\n";
}

}  // namespace clausealign
