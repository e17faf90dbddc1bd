#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace memtrace {

inline constexpr const char* kCodeVersion = "0.1.0";

// Hash of the canonical (key-sorted) serialization; stable under key
// reordering of the input object.
std::string config_hash(const nlohmann::json& config);

// Written before any result file so interrupted runs stay identifiable.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string code_version = kCodeVersion;
  std::vector<std::string> outputs;
  double wall_clock_s = 0.0;

  nlohmann::json to_json() const;
};

// out/<subcommand>/<config-hash>/ under the given root.
std::filesystem::path run_directory(const std::filesystem::path& out_root,
                                    const std::string& subcommand,
                                    const nlohmann::json& config);

void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

}  // namespace memtrace
