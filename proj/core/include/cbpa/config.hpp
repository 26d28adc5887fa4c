// Run configuration: a strict JSON schema backed by an introspectable key
// registry (every tunable constant appears there with a documented default),
// with key-path diagnostics on violations.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace cbpa::config {

using json = nlohmann::json;

struct KeySpec {
  std::string path;       // dotted, e.g. "hvu.j_min"
  std::string type;       // "number" | "integer" | "boolean" | "string"
  json default_value;
  std::string doc;
  std::string scenario;   // "" = global, else only valid for that scenario
};

// The full schema: one entry per accepted key. Tests walk this to verify no
// hidden constants exist.
const std::vector<KeySpec>& key_registry();

struct RunConfig {
  std::string scenario;   // "hvu" | "ctf" | "seek_sample"
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  json values;            // fully defaulted, validated key/value tree

  double num(const std::string& path) const;
  int integer(const std::string& path) const;
  bool flag(const std::string& path) const;
  std::string str(const std::string& path) const;
};

// Parse + validate a config document. Unknown keys, type mismatches and
// cross-field invariant violations throw std::invalid_argument naming the
// offending key path. Missing keys take registry defaults.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::filesystem::path& path);

// The fully-defaulted document a run should echo to its output directory.
json effective_config(const RunConfig& cfg);

}  // namespace cbpa::config
