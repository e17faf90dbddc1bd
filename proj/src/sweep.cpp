#include "memtrace/sweep.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "memtrace/envs.hpp"

namespace memtrace {

namespace {

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

template <typename Fn>
std::vector<SweepPoint> run_cells(const std::vector<double>& values,
                                  std::size_t seeds, std::size_t workers,
                                  Fn&& cell) {
  struct Job {
    double value;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double v : values)
    for (std::size_t s = 0; s < seeds; ++s)
      jobs.push_back({v, static_cast<std::uint64_t>(s)});

  std::vector<SweepPoint> points(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      points[i] = cell(jobs[i].value, jobs[i].seed);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n = std::min(worker_count(workers), jobs.size());
  for (std::size_t i = 0; i + 1 < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return points;
}

}  // namespace

std::vector<SweepSummary> summarize(const std::vector<SweepPoint>& points) {
  std::map<double, std::vector<double>> groups;
  for (const auto& p : points) groups[p.axis_value].push_back(p.final_metric);
  std::vector<SweepSummary> rows;
  for (const auto& [value, metrics] : groups) {
    SweepSummary s;
    s.axis_value = value;
    s.count = metrics.size();
    double sum = 0.0;
    for (double m : metrics) sum += m;
    s.mean = sum / static_cast<double>(metrics.size());
    double sq = 0.0;
    for (double m : metrics) sq += (m - s.mean) * (m - s.mean);
    const double sd = metrics.size() > 1
                          ? std::sqrt(sq / static_cast<double>(metrics.size() - 1))
                          : 0.0;
    s.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(metrics.size()));
    rows.push_back(s);
  }
  return rows;
}

SweepResult td_sweep(const CompiledEnv& env, const TdConfig& base,
                     const std::string& axis, const std::vector<double>& values,
                     std::size_t seeds, std::size_t workers) {
  if (values.empty()) throw std::invalid_argument("empty sweep grid");
  SweepResult result;
  result.axis = axis;
  result.points = run_cells(
      values, seeds, workers, [&](double value, std::uint64_t seed) {
        TdConfig cfg = base;
        cfg.seed = base.seed ^ seed;
        if (axis == "alpha")
          cfg.alpha = value;
        else if (axis == "lambda")
          cfg.feature.lambda = value;
        else if (axis == "m")
          cfg.feature.m = static_cast<std::size_t>(value + 0.5);
        else
          throw std::invalid_argument("unknown sweep axis: " + axis);
        const TdResult run = td_run(env, cfg);
        SweepPoint p;
        p.axis_value = value;
        p.seed = cfg.seed;
        p.curve = run.curve;
        p.final_metric = run.curve.empty() ? 0.0 : run.curve.back().metric;
        return p;
      });
  result.summary = summarize(result.points);
  return result;
}

SweepResult ppo_sweep(const PpoConfig& base, const std::string& axis,
                      const std::vector<double>& values, std::size_t seeds,
                      std::size_t workers, std::size_t default_k) {
  if (values.empty()) throw std::invalid_argument("empty sweep grid");
  SweepResult result;
  result.axis = axis;
  result.points = run_cells(
      values, seeds, workers, [&](double value, std::uint64_t seed) {
        PpoConfig cfg = base;
        cfg.seed = base.seed ^ seed;
        std::size_t k = default_k;
        if (axis == "k") {
          k = static_cast<std::size_t>(value + 0.5);
        } else if (axis == "lambda") {
          cfg.trace_lambdas = {value};
          cfg.frame_stack = 0;
        } else {
          throw std::invalid_argument("unknown sweep axis: " + axis);
        }
        const CompiledEnv env(tmaze_env(k));
        const PpoResult run = ppo_train(env, cfg);
        SweepPoint p;
        p.axis_value = value;
        p.seed = cfg.seed;
        p.curve = run.curve;
        p.final_metric = final_success_rate(run);
        return p;
      });
  result.summary = summarize(result.points);
  return result;
}

std::vector<double> alpha_grid_13() {
  std::vector<double> grid(13);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = std::pow(10.0, -4.0 + static_cast<double>(i) / 3.0);
  return grid;
}

}  // namespace memtrace
