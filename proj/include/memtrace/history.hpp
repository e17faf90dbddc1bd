#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "memtrace/observation.hpp"

namespace memtrace {

// Sentinel for window positions beyond the recorded history. Kept distinct
// from every real symbol so a padded window never aliases one that saw the
// symbol with index 0.
inline constexpr int kPad = -1;

// Finite observation history, most recent first: at(0) is the current
// observation, at(k) the one k steps ago. Positions beyond length() read as
// virtual zero vectors (pad).
class History {
 public:
  History() = default;
  explicit History(std::vector<int> most_recent_first)
      : obs_(std::move(most_recent_first)) {}

  static History from_oldest_first(std::vector<int> chronological);
  // Chronological one-character-label word, e.g. "aoox" for a T-maze run.
  static History parse(std::string_view word, const ObservationSpace& space);

  std::size_t length() const { return obs_.size(); }
  bool empty() const { return obs_.empty(); }
  int at(std::size_t k) const {
    return k < obs_.size() ? obs_[k] : kPad;
  }
  const std::vector<int>& indices() const { return obs_; }

  bool operator==(const History&) const = default;
  auto operator<=>(const History&) const = default;

  // Chronological label string (oldest first), for reports.
  std::string str(const ObservationSpace& space) const;

 private:
  std::vector<int> obs_;
};

// Truncated history of fixed length m, most recent first, padded with kPad.
struct WindowKey {
  std::vector<int> ids;

  std::size_t length() const { return ids.size(); }
  bool operator==(const WindowKey&) const = default;
  auto operator<=>(const WindowKey&) const = default;
  std::string str(const ObservationSpace& space) const;
};

WindowKey window_of_history(const History& h, std::size_t m);

}  // namespace memtrace
