#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "memtrace/history.hpp"
#include "memtrace/observation.hpp"
#include "memtrace/trace.hpp"

namespace memtrace {

// Result of evaluating one of the trace-distance inequalities on a concrete
// history pair. satisfied is evaluated with absolute tolerance 1e-12.
struct MarginReport {
  History h, hbar;
  std::size_t m = 0;
  double lhs = 0.0;  // actual trace distance
  double rhs = 0.0;  // bound
  bool satisfied = false;
};

// Upper bound sqrt(2) * lambda^m for pairs sharing the length-m window.
MarginReport check_concentration(const History& h, const History& hbar,
                                 std::size_t m, double lambda,
                                 const ObservationSpace& space);

// Lower bound sqrt(2) * (1 - 2 lambda) * lambda^(m-1) for pairs with
// different length-m windows; requires lambda <= 1/2.
MarginReport check_separation(const History& h, const History& hbar,
                              std::size_t m, double lambda,
                              const ObservationSpace& space);

struct CollisionWitness {
  History h, hbar;
  double lambda = 0.0;
  double distance = 0.0;
};

struct ScanOptions {
  std::uint64_t max_histories = 200'000;
  double tol = 1e-9;
};

// Searches all history pairs up to max_len for equal traces. Returns the
// first witness found (histories ordered by length, then lexicographically),
// or nullopt.
std::optional<CollisionWitness> injectivity_scan(const ObservationSpace& space,
                                                 std::size_t max_len,
                                                 double lambda,
                                                 const ScanOptions& opts = {});

// Same scan in exact integer arithmetic for lambda = p/q; requires an
// integer-coordinate space. Distinguishes true collisions from lambda^m
// underflow.
std::optional<CollisionWitness> injectivity_scan_exact(
    const ObservationSpace& space, std::size_t max_len, long long p,
    long long q, const ScanOptions& opts = {});

// d_lambda = log|Y| / log(1/lambda); 0 at lambda = 0 by convention.
double minkowski_dimension(double lambda, std::size_t ysize);
// min{|Y| - 1, d_lambda}, the dimension of the trace closure never exceeds
// the affine slice it lives in.
double minkowski_dimension_capped(double lambda, std::size_t ysize);

// Orthonormal basis of the hyperplane orthogonal to the all-ones direction,
// built by deterministic Gram-Schmidt; rows b_1..b_{n-1}, row-major.
std::vector<double> subspace_basis(std::size_t ysize);

struct ProjectedPoint {
  std::vector<double> coords;  // |Y| - 1 projection coordinates
  WindowKey key;               // truncated window of the generating history
};

// Length-m trace cloud projected onto the affine slice; one row per length-m
// history. Supported for ysize 3 and 4 (2-D and 3-D exports).
std::vector<ProjectedPoint> fractal_points(std::size_t m, double lambda,
                                           std::size_t ysize,
                                           std::size_t key_len);

}  // namespace memtrace
