#include "memtrace/observation.hpp"

#include <set>
#include <stdexcept>

namespace memtrace {

std::string default_label(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "o" + std::to_string(i);
}

ObservationSpace ObservationSpace::make_one_hot(std::size_t n) {
  if (n < 1) throw std::invalid_argument("observation space must be nonempty");
  ObservationSpace s;
  s.size = n;
  s.dim = n;
  s.one_hot = true;
  s.coords.assign(n * n, 0.0);
  s.icoords.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    s.coords[i * n + i] = 1.0;
    s.icoords[i * n + i] = 1;
    s.labels.push_back(default_label(i));
  }
  return s;
}

ObservationSpace ObservationSpace::from_integer_vectors(
    const std::vector<std::vector<long long>>& rows,
    std::vector<std::string> names) {
  if (rows.empty()) throw std::invalid_argument("observation space must be nonempty");
  ObservationSpace s;
  s.size = rows.size();
  s.dim = rows.front().size();
  s.one_hot = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != s.dim)
      throw std::invalid_argument("ragged observation vectors");
    for (long long v : rows[i]) {
      s.coords.push_back(static_cast<double>(v));
      s.icoords.push_back(v);
    }
    s.labels.push_back(i < names.size() ? names[i] : default_label(i));
  }
  std::set<std::string> distinct(s.labels.begin(), s.labels.end());
  if (distinct.size() != s.labels.size())
    throw std::invalid_argument("observation labels must be distinct");
  return s;
}

}  // namespace memtrace
