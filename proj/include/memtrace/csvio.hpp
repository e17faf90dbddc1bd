#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace memtrace {

// CSV with a versioned schema tag on the first line:
//   # schema=<name>.v<N>
// Readers refuse files whose tag differs, so outputs from different schema
// versions cannot be concatenated silently.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& schema,
            const std::vector<std::string>& columns);
  void raw_row(const std::string& line);
  void row(const std::vector<std::string>& cells);

  static std::string num(double v);
  static std::string num(std::size_t v);

 private:
  std::ofstream out_;
};

std::optional<std::string> csv_schema(const std::filesystem::path& path);
bool csv_schema_matches(const std::filesystem::path& path,
                        const std::string& schema);

}  // namespace memtrace
