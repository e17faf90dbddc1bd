#include "memtrace/estimator.hpp"

#include <cmath>
#include <limits>

namespace memtrace {

double LipschitzEstimator::value_at_trace(const MemoryTrace& z) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    const double candidate =
        values_[i] + lipschitz_ * trace_distance(z, anchors_[i]);
    if (candidate < best) best = candidate;
  }
  return clamp(best);
}

double LinearTraceEstimator::raw_value(const History& h) const {
  const auto z = trace_of_history(h, lambda_, space_);
  double v = 0.0;
  for (std::size_t d = 0; d < weights_.size(); ++d) v += weights_[d] * z.z[d];
  return v;
}

double SnappedEstimator::raw_value(const History& h) const {
  return nearest_grid_value(grid_, base_->value(h));
}

double nearest_grid_value(std::span<const double> grid, double v) {
  double best = grid.front();
  double best_dist = std::abs(v - best);
  for (double g : grid) {
    const double d = std::abs(v - g);
    if (d < best_dist) {
      best = g;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace memtrace
