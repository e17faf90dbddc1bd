#include "memtrace/manifest.hpp"

#include <cstdio>
#include <fstream>

namespace memtrace {

std::string config_hash(const nlohmann::json& config) {
  // nlohmann keeps object keys sorted, so dump() is canonical.
  const std::string text = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  return {{"subcommand", subcommand},
          {"config", config},
          {"config_hash", config_hash(config)},
          {"seed", seed},
          {"code_version", code_version},
          {"outputs", outputs},
          {"wall_clock_s", wall_clock_s}};
}

std::filesystem::path run_directory(const std::filesystem::path& out_root,
                                    const std::string& subcommand,
                                    const nlohmann::json& config) {
  return out_root / subcommand / config_hash(config);
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "manifest.json");
  out << m.to_json().dump(2) << "\n";
}

}  // namespace memtrace
