#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memtrace/pomdp.hpp"
#include "memtrace/td.hpp"

namespace memtrace {

// Clipped-surrogate policy optimization on the corridor task. Memory is
// either a set of parallel traces (one trace vector per forgetting factor,
// concatenated) or a frame stack of the last m observations.
struct PpoConfig {
  std::vector<double> trace_lambdas;  // parallel traces; empty -> frame stack
  std::size_t frame_stack = 0;

  std::size_t hidden = 64;  // two hidden layers, tanh
  double clip = 0.2;
  double gae_lambda = 0.95;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
  double lr = 3e-4;
  bool lr_decay = true;  // linear to 0
  bool normalize_advantages = true;
  std::size_t epochs = 2;
  std::size_t minibatches = 8;
  std::size_t n_envs = 8;
  std::size_t steps_per_env = 64;
  std::size_t total_steps = 2'000'000;  // counted across parallel envs
  double gamma = 0.99;
  std::uint64_t seed = 0;
};

struct PpoResult {
  std::vector<std::uint8_t> episode_success;  // per finished episode
  std::vector<CurvePoint> curve;  // (global step, rolling success rate)
  std::size_t episodes = 0;
  bool diverged = false;
  std::string diagnostic;
};

PpoResult ppo_train(const CompiledEnv& env, const PpoConfig& cfg);

// Generalized advantage estimation over one environment's step sequence.
// dones[t] marks a terminal transition at step t (no bootstrapping across
// it); bootstrap_value is V of the state after the last step.
void gae_advantages(std::span<const double> rewards,
                    std::span<const double> values,
                    std::span<const std::uint8_t> dones, double bootstrap_value,
                    double gamma, double lambda, std::span<double> out);

// d(clipped surrogate loss)/d(new log-prob) for one sample; zero where the
// ratio is clipped and the advantage points outward.
double clipped_surrogate_dlogp(double logp_new, double logp_old,
                               double advantage, double clip);

// Mean success over the final fraction of episodes.
double final_success_rate(const PpoResult& result, double fraction = 0.1);

}  // namespace memtrace
