#pragma once

#include <cstdint>
#include <vector>

#include "memtrace/pomdp.hpp"

namespace memtrace {

// History features for online prediction: the memory trace vector (|Y|
// weights), the tabular one-hot window key (|Y|^m weights), or the
// concatenation of the last m one-hot observations (m|Y| weights).
enum class FeatureKind { Trace, FullWindow, ConcatWindow };

struct TdFeature {
  FeatureKind kind = FeatureKind::Trace;
  double lambda = 0.0;  // Trace
  std::size_t m = 1;    // FullWindow / ConcatWindow
};

struct TdConfig {
  TdFeature feature;
  double alpha = 0.02;
  double gamma = 0.99;
  std::size_t total_steps = 100'000;
  std::size_t burn_in = 100;  // steps before updates start
  std::vector<std::size_t> eval_at;  // checkpoint steps; empty = {total_steps}
  std::size_t eval_points = 5'000;   // held-out Monte Carlo regression size
  double return_tol = 1e-4;
  std::uint64_t seed = 0;
  std::size_t table_cap = std::size_t{1} << 24;
};

struct CurvePoint {
  std::size_t step = 0;
  double metric = 0.0;
};

struct TdResult {
  std::vector<CurvePoint> curve;  // (step, held-out return error)
  std::vector<double> weights;
  std::size_t parameters = 0;
};

// TD(0) with linear function approximation on a continuing fixed-policy
// environment; deterministic per seed. Return errors are measured at the
// checkpoints on a fresh held-out stream.
TdResult td_run(const CompiledEnv& env, const TdConfig& cfg);

struct OracleResult {
  double error = 0.0;
  std::size_t parameters = 0;
};

// Best achievable return error of the feature class, estimated by exact
// conditional means (windows) or least squares (trace / concatenated
// windows) on half the samples and scored on the held-out half.
OracleResult best_return_error(const CompiledEnv& env, TdFeature feature,
                               std::size_t n_samples, std::uint64_t seed,
                               double gamma, std::size_t burn_in = 100,
                               double return_tol = 1e-4);

}  // namespace memtrace
