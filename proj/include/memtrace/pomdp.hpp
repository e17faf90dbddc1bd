#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memtrace/history.hpp"
#include "memtrace/observation.hpp"
#include "memtrace/rng.hpp"

namespace memtrace {

// Tabular POMDP. Rewards decompose into a transition component r(x, u, x')
// and an observation component r(y) charged when y is emitted; either table
// may be absent. A fixed policy turns the model into a hidden Markov model.
struct PomdpSpec {
  std::string name;
  std::size_t nstates = 0;
  std::size_t nactions = 0;
  std::size_t nobs = 0;
  std::vector<double> transition;         // [u][x][x'], row-stochastic
  std::vector<double> emission;           // [x][y], row-stochastic
  std::vector<double> initial;            // [x]
  std::vector<double> obs_reward;         // [y] or empty
  std::vector<double> transition_reward;  // [u][x][x'] or empty
  double gamma = 0.99;
  double rmin = 0.0, rmax = 0.0;
  std::vector<std::uint8_t> terminal;  // [x] flags; empty for continuing tasks
  std::size_t max_episode_len = 0;     // 0 = unbounded
  ObservationSpace space;

  bool episodic() const { return !terminal.empty(); }
  double trans(std::size_t u, std::size_t x, std::size_t x2) const {
    return transition[(u * nstates + x) * nstates + x2];
  }
  double emit(std::size_t x, std::size_t y) const {
    return emission[x * nobs + y];
  }
  double trans_reward(std::size_t u, std::size_t x, std::size_t x2) const {
    return transition_reward.empty()
               ? 0.0
               : transition_reward[(u * nstates + x) * nstates + x2];
  }
  // Largest absolute row-sum deviation from 1 over all distribution rows.
  double distribution_defect() const;
};

// Walker/Vose alias table for O(1) categorical sampling.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> probs);
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> accept_;
  std::vector<std::uint32_t> alias_;
};

// Spec plus precomputed samplers; build once, share across workers.
class CompiledEnv {
 public:
  explicit CompiledEnv(PomdpSpec spec);
  const PomdpSpec& spec() const { return spec_; }
  std::size_t sample_initial(Rng& rng) const { return initial_.sample(rng); }
  std::size_t sample_next(std::size_t u, std::size_t x, Rng& rng) const {
    return next_[u * spec_.nstates + x].sample(rng);
  }
  std::size_t sample_obs(std::size_t x, Rng& rng) const {
    return obs_[x].sample(rng);
  }

 private:
  PomdpSpec spec_;
  AliasTable initial_;
  std::vector<AliasTable> next_;
  std::vector<AliasTable> obs_;
};

struct Policy {
  enum class Kind { Fixed, UniformRandom };
  Kind kind = Kind::Fixed;
  std::size_t fixed_action = 0;

  static Policy fixed(std::size_t u) { return {Kind::Fixed, u}; }
  static Policy uniform() { return {Kind::UniformRandom, 0}; }
};

// One sampled rollout. observations[t] is y_t; rewards[t] is the reward
// received after taking actions[t] (i.e. alongside y_{t+1}), so the
// discounted return from time t is sum_s gamma^s rewards[t+s]. origin marks
// the evaluation time for datasets with burn-in.
struct Trajectory {
  std::vector<int> observations;
  std::vector<int> actions;
  std::vector<double> rewards;
  std::uint64_t seed = 0;
  std::size_t origin = 0;
  bool terminated = false;  // reached a terminal state (vs horizon cut)
};

// History (most recent first) seen at time t of a trajectory.
History history_at(const Trajectory& traj, std::size_t t);

struct StepResult {
  std::size_t obs = 0;
  double reward = 0.0;
  bool done = false;
};

class PomdpSimulator {
 public:
  PomdpSimulator(const CompiledEnv& env, Rng rng);
  std::size_t reset();
  StepResult step(std::size_t action);
  std::size_t state() const { return state_; }
  std::size_t steps_taken() const { return steps_; }

 private:
  const CompiledEnv* env_;
  Rng rng_;
  std::size_t state_ = 0;
  std::size_t steps_ = 0;
};

// Deterministic given (env, policy, seed). Episodic environments stop at a
// terminal state or the episode cap; continuing ones run exactly horizon
// steps.
Trajectory sample_trajectory(const CompiledEnv& env, Policy policy,
                             std::size_t horizon, std::uint64_t seed);

}  // namespace memtrace
