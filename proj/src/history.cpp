#include "memtrace/history.hpp"

#include <algorithm>
#include <stdexcept>

namespace memtrace {

History History::from_oldest_first(std::vector<int> chronological) {
  std::reverse(chronological.begin(), chronological.end());
  return History(std::move(chronological));
}

History History::parse(std::string_view word, const ObservationSpace& space) {
  std::vector<int> chronological;
  chronological.reserve(word.size());
  for (char c : word) {
    int found = -1;
    for (std::size_t i = 0; i < space.size; ++i) {
      if (space.labels[i].size() == 1 && space.labels[i][0] == c) {
        found = static_cast<int>(i);
        break;
      }
    }
    if (found < 0) throw std::invalid_argument("unknown observation label");
    chronological.push_back(found);
  }
  return from_oldest_first(std::move(chronological));
}

std::string History::str(const ObservationSpace& space) const {
  std::string out;
  for (auto it = obs_.rbegin(); it != obs_.rend(); ++it)
    out += space.labels[static_cast<std::size_t>(*it)];
  return out;
}

std::string WindowKey::str(const ObservationSpace& space) const {
  std::string out;
  for (int id : ids)
    out += id == kPad ? std::string("_") : space.labels[static_cast<std::size_t>(id)];
  return out;
}

WindowKey window_of_history(const History& h, std::size_t m) {
  WindowKey w;
  w.ids.reserve(m);
  for (std::size_t k = 0; k < m; ++k) w.ids.push_back(h.at(k));
  return w;
}

}  // namespace memtrace
