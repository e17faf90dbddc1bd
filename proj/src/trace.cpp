#include "memtrace/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memtrace {

double MemoryTrace::sum() const {
  double s = 0.0;
  for (double v : z) s += v;
  return s;
}

static void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("forgetting factor must be in [0, 1)");
}

MemoryTrace zero_trace(double lambda, const ObservationSpace& space) {
  check_lambda(lambda);
  return {std::vector<double>(space.dim, 0.0), lambda};
}

MemoryTrace trace_update(const MemoryTrace& z, std::size_t y,
                         const ObservationSpace& space) {
  if (y >= space.size) throw std::out_of_range("observation index out of range");
  if (z.z.size() != space.dim) throw std::invalid_argument("trace/space dimension mismatch");
  MemoryTrace out = z;
  auto obs = space.vec(y);
  for (std::size_t d = 0; d < space.dim; ++d)
    out.z[d] = z.lambda * z.z[d] + (1.0 - z.lambda) * obs[d];
  return out;
}

MemoryTrace trace_of_history(const History& h, double lambda,
                             const ObservationSpace& space) {
  check_lambda(lambda);
  MemoryTrace out = zero_trace(lambda, space);
  double decay = 1.0 - lambda;  // (1 - lambda) * lambda^k
  for (std::size_t k = 0; k < h.length(); ++k) {
    const int y = h.at(k);
    if (y < 0 || static_cast<std::size_t>(y) >= space.size)
      throw std::out_of_range("observation index out of range");
    auto obs = space.vec(static_cast<std::size_t>(y));
    for (std::size_t d = 0; d < space.dim; ++d) out.z[d] += decay * obs[d];
    decay *= lambda;
  }
  return out;
}

MemoryTrace trace_of_window(const WindowKey& w, double lambda,
                            const ObservationSpace& space) {
  check_lambda(lambda);
  MemoryTrace out = zero_trace(lambda, space);
  double decay = 1.0 - lambda;
  for (std::size_t k = 0; k < w.ids.size(); ++k) {
    const int y = w.ids[k];
    if (y != kPad) {
      if (y < 0 || static_cast<std::size_t>(y) >= space.size)
        throw std::out_of_range("observation index out of range");
      auto obs = space.vec(static_cast<std::size_t>(y));
      for (std::size_t d = 0; d < space.dim; ++d) out.z[d] += decay * obs[d];
    }
    decay *= lambda;
  }
  return out;
}

double trace_distance(const MemoryTrace& a, const MemoryTrace& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.z.size(); ++d) {
    const double diff = a.z[d] - b.z[d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

std::vector<MemoryTrace> enumerate_traces(std::size_t m, double lambda,
                                          const ObservationSpace& space,
                                          const TraceSetOptions& opts) {
  check_lambda(lambda);
  const double count = std::pow(static_cast<double>(space.size),
                                static_cast<double>(m));
  if (count > static_cast<double>(opts.cap))
    throw std::length_error("trace enumeration exceeds cap");
  const std::uint64_t n = static_cast<std::uint64_t>(count + 0.5);

  std::vector<MemoryTrace> points;
  points.reserve(n);
  std::vector<int> digits(m, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    points.push_back(trace_of_history(History(digits), lambda, space));
    for (std::size_t pos = 0; pos < m; ++pos) {
      if (++digits[pos] < static_cast<int>(space.size)) break;
      digits[pos] = 0;
    }
  }

  // Collisions are rare (special forgetting factors only), so quadratic
  // dedup is fine at the sizes the cap admits for exact checks; larger sets
  // are deduplicated by sorting, which catches exact duplicates.
  std::vector<MemoryTrace> out;
  if (n <= 4096) {
    for (auto& p : points) {
      bool dup = false;
      for (const auto& q : out)
        if (trace_distance(p, q) < opts.dedup_tol) {
          dup = true;
          break;
        }
      if (!dup) out.push_back(std::move(p));
    }
  } else {
    std::sort(points.begin(), points.end(),
              [](const MemoryTrace& a, const MemoryTrace& b) { return a.z < b.z; });
    for (auto& p : points)
      if (out.empty() || trace_distance(p, out.back()) >= opts.dedup_tol)
        out.push_back(std::move(p));
  }
  return out;
}

}  // namespace memtrace
