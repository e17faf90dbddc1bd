#pragma once

#include <span>
#include <string>
#include <vector>

namespace memtrace {

// Finite observation alphabet embedded in a Euclidean space. The common case
// is one-hot (symbols are standard basis vectors); general integer-vector
// alphabets are supported for the injectivity experiments on linearly
// dependent observation sets.
struct ObservationSpace {
  std::size_t size = 0;  // number of symbols
  std::size_t dim = 0;   // ambient vector dimension
  std::vector<std::string> labels;
  std::vector<double> coords;      // row-major size x dim
  std::vector<long long> icoords;  // exact integer coordinates, same shape
  bool one_hot = false;

  static ObservationSpace make_one_hot(std::size_t n);
  static ObservationSpace from_integer_vectors(
      const std::vector<std::vector<long long>>& rows,
      std::vector<std::string> names = {});

  std::span<const double> vec(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }
  std::span<const long long> ivec(std::size_t i) const {
    return {icoords.data() + i * dim, dim};
  }
  bool integral() const { return !icoords.empty(); }
};

// Default symbol names: a, b, c, ... then o10, o11, ...
std::string default_label(std::size_t i);

}  // namespace memtrace
