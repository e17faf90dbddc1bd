#pragma once

#include <string>
#include <vector>

#include "memtrace/ppo.hpp"
#include "memtrace/td.hpp"

namespace memtrace {

struct SweepPoint {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double final_metric = 0.0;
  std::vector<CurvePoint> curve;
};

struct SweepSummary {
  double axis_value = 0.0;
  double mean = 0.0;
  double ci95 = 0.0;  // normal-approximation half width
  std::size_t count = 0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepPoint> points;
  std::vector<SweepSummary> summary;
};

// Full cross product of axis values and seeds; one learning curve per cell,
// executed across workers with results in deterministic order. axis is one
// of "alpha", "lambda", "m".
SweepResult td_sweep(const CompiledEnv& env, const TdConfig& base,
                     const std::string& axis, const std::vector<double>& values,
                     std::size_t seeds, std::size_t workers = 0);

// Same for the control task; axis is "k" (corridor length, environment is
// rebuilt per cell) or "lambda" (single-trace memory at corridor default_k).
SweepResult ppo_sweep(const PpoConfig& base, const std::string& axis,
                      const std::vector<double>& values, std::size_t seeds,
                      std::size_t workers = 0, std::size_t default_k = 4);

std::vector<SweepSummary> summarize(const std::vector<SweepPoint>& points);

// The 13 logarithmically spaced step sizes between 1e-4 and 1.
std::vector<double> alpha_grid_13();

}  // namespace memtrace
