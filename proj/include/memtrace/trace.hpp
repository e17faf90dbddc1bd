#pragma once

#include <cstdint>
#include <vector>

#include "memtrace/history.hpp"
#include "memtrace/observation.hpp"

namespace memtrace {

// Exponential moving average of the observation stream:
//   z <- lambda * z + (1 - lambda) * y
// with forgetting factor lambda in [0, 1). Equivalently, for a finite history
// (most recent first), z = (1 - lambda) * sum_k lambda^k * y_{-k}.
struct MemoryTrace {
  std::vector<double> z;
  double lambda = 0.0;

  double sum() const;
};

MemoryTrace zero_trace(double lambda, const ObservationSpace& space);

// One recursive step; the input trace is left unchanged.
MemoryTrace trace_update(const MemoryTrace& z, std::size_t y,
                         const ObservationSpace& space);

// Closed-form evaluation over the whole history.
MemoryTrace trace_of_history(const History& h, double lambda,
                             const ObservationSpace& space);

// Same, over a truncated window; pad entries contribute nothing, so the
// result is bit-identical to the trace of the unpadded prefix.
MemoryTrace trace_of_window(const WindowKey& w, double lambda,
                            const ObservationSpace& space);

double trace_distance(const MemoryTrace& a, const MemoryTrace& b);

struct TraceSetOptions {
  std::uint64_t cap = 1u << 22;  // maximum |Y|^m before refusing
  double dedup_tol = 1e-9;
};

// All distinct traces of length-m histories. Exactly |Y|^m points unless the
// forgetting factor admits collisions.
std::vector<MemoryTrace> enumerate_traces(std::size_t m, double lambda,
                                          const ObservationSpace& space,
                                          const TraceSetOptions& opts = {});

}  // namespace memtrace
