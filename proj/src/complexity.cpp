#include "memtrace/complexity.hpp"

#include <cmath>
#include <stdexcept>

#include "memtrace/geometry.hpp"

namespace memtrace {

EntropyQuote entropy_window(std::size_t m, std::size_t ysize, ValueRange range,
                            double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("resolution must be positive");
  if (range.delta() < 0.0) throw std::invalid_argument("empty value range");
  EntropyQuote q;
  q.epsilon = epsilon;
  q.exact = true;
  q.per_cell = std::log(std::ceil(range.delta() / (2.0 * epsilon)));
  q.log_count = static_cast<double>(m) * std::log(static_cast<double>(ysize));
  q.value = std::exp(q.log_count) * q.per_cell;
  q.klass = "window m=" + std::to_string(m);
  return q;
}

EntropyQuote entropy_trace_bounds(double lambda, double L, std::size_t ysize,
                                  ValueRange range, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("resolution must be positive");
  if (L <= 0.0) throw std::invalid_argument("Lipschitz constant must be positive");
  const double y = static_cast<double>(ysize);
  EntropyQuote q;
  q.epsilon = epsilon;
  q.exact = false;
  q.per_cell = std::log(std::ceil(range.delta() / epsilon));
  const double d = minkowski_dimension(lambda, ysize);
  q.bound_cover = q.per_cell * y * std::pow(2.0 * L / epsilon, d);
  q.bound_grid =
      q.per_cell *
      std::pow(std::ceil(2.0 * L * std::sqrt(y - 1.0) / epsilon), y - 1.0);
  q.value = std::min(q.bound_cover, q.bound_grid);
  q.log_count = std::log(q.value / q.per_cell);
  q.klass = "trace lambda=" + std::to_string(lambda) + " L=" + std::to_string(L);
  return q;
}

double hoeffding_bound(double entropy_nats, std::size_t n, double delta_conf,
                       ValueRange range, double epsilon, double base_error) {
  if (n < 1) throw std::invalid_argument("need at least one trajectory");
  if (!(delta_conf > 0.0 && delta_conf < 1.0))
    throw std::invalid_argument("confidence level must be in (0, 1)");
  if (epsilon < 0.0) throw std::invalid_argument("resolution must be nonnegative");
  const double delta = range.delta();
  return base_error +
         delta * delta *
             std::sqrt((entropy_nats + std::log(2.0 / delta_conf)) /
                       (2.0 * static_cast<double>(n))) +
         epsilon * delta + 0.5 * epsilon * epsilon;
}

double lipschitz_for_window(std::size_t m, double lambda, ValueRange range) {
  if (m < 1) throw std::invalid_argument("window length must be at least 1");
  if (!(lambda >= 0.0 && lambda < 0.5))
    throw std::invalid_argument("requires lambda < 1/2");
  return range.delta() / (std::sqrt(2.0) * (1.0 - 2.0 * lambda) *
                          std::pow(lambda, static_cast<double>(m) - 1.0));
}

std::size_t window_for_trace(double lambda, double L, double epsilon) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("forgetting factor must be in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < L))
    throw std::invalid_argument("resolution must be in (0, L)");
  const double m = std::ceil(std::log(L / epsilon) / std::log(1.0 / lambda));
  return static_cast<std::size_t>(m);
}

TMazeConstants tmaze_constants(std::size_t k) {
  if (k < 1) throw std::invalid_argument("corridor length must be at least 1");
  const double kd = static_cast<double>(k);
  return {(kd - 1.0) / kd, std::sqrt(2.0) * std::exp(1.0) * kd, k};
}

std::vector<double> value_grid(ValueRange range, double cover_eps) {
  if (cover_eps <= 0.0) throw std::invalid_argument("resolution must be positive");
  const double delta = range.delta();
  const std::size_t n =
      static_cast<std::size_t>(std::ceil(delta / (2.0 * cover_eps)));
  const std::size_t count = n == 0 ? 1 : n;
  const double span = static_cast<double>(count - 1) * 2.0 * cover_eps;
  const double lo = range.vmin + (delta - span) / 2.0;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + static_cast<double>(i) * 2.0 * cover_eps;
  return grid;
}

}  // namespace memtrace
