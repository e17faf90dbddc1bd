#include "memtrace/csvio.hpp"

#include <cstdio>
#include <stdexcept>

namespace memtrace {

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::string& schema,
                     const std::vector<std::string>& columns) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw std::runtime_error("cannot open " + path.string());
  out_ << "# schema=" << schema << "\n";
  row(columns);
}

void CsvWriter::raw_row(const std::string& line) { out_ << line << "\n"; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << cells[i];
  }
  out_ << "\n";
}

std::string CsvWriter::num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvWriter::num(std::size_t v) { return std::to_string(v); }

std::optional<std::string> csv_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line)) return std::nullopt;
  const std::string prefix = "# schema=";
  if (line.rfind(prefix, 0) != 0) return std::nullopt;
  return line.substr(prefix.size());
}

bool csv_schema_matches(const std::filesystem::path& path,
                        const std::string& schema) {
  const auto found = csv_schema(path);
  return found.has_value() && *found == schema;
}

}  // namespace memtrace
