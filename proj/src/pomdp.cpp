#include "memtrace/pomdp.hpp"

#include <cmath>
#include <stdexcept>

namespace memtrace {

double PomdpSpec::distribution_defect() const {
  double worst = 0.0;
  auto row_defect = [&](const double* row, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += row[i];
    worst = std::max(worst, std::abs(s - 1.0));
  };
  for (std::size_t u = 0; u < nactions; ++u)
    for (std::size_t x = 0; x < nstates; ++x)
      row_defect(&transition[(u * nstates + x) * nstates], nstates);
  for (std::size_t x = 0; x < nstates; ++x) row_defect(&emission[x * nobs], nobs);
  row_defect(initial.data(), nstates);
  return worst;
}

AliasTable::AliasTable(std::span<const double> probs) {
  const std::size_t n = probs.size();
  accept_.assign(n, 1.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  double total = 0.0;
  for (double p : probs) total += p;
  for (std::size_t i = 0; i < n; ++i)
    scaled[i] = probs[i] / total * static_cast<double>(n);

  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 within rounding.
  for (std::uint32_t i : small) accept_[i] = 1.0;
  for (std::uint32_t i : large) accept_[i] = 1.0;
}

std::size_t AliasTable::sample(Rng& rng) const {
  const std::size_t n = accept_.size();
  const std::size_t i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
  return rng.uniform() < accept_[i] ? i : alias_[i];
}

CompiledEnv::CompiledEnv(PomdpSpec spec) : spec_(std::move(spec)) {
  if (spec_.distribution_defect() > 1e-12)
    throw std::invalid_argument("distribution rows must sum to 1");
  initial_ = AliasTable(spec_.initial);
  next_.reserve(spec_.nactions * spec_.nstates);
  for (std::size_t u = 0; u < spec_.nactions; ++u)
    for (std::size_t x = 0; x < spec_.nstates; ++x)
      next_.emplace_back(std::span<const double>(
          &spec_.transition[(u * spec_.nstates + x) * spec_.nstates],
          spec_.nstates));
  obs_.reserve(spec_.nstates);
  for (std::size_t x = 0; x < spec_.nstates; ++x)
    obs_.emplace_back(
        std::span<const double>(&spec_.emission[x * spec_.nobs], spec_.nobs));
}

History history_at(const Trajectory& traj, std::size_t t) {
  std::vector<int> most_recent_first;
  most_recent_first.reserve(t + 1);
  for (std::size_t k = 0; k <= t; ++k)
    most_recent_first.push_back(traj.observations[t - k]);
  return History(std::move(most_recent_first));
}

PomdpSimulator::PomdpSimulator(const CompiledEnv& env, Rng rng)
    : env_(&env), rng_(rng) {}

std::size_t PomdpSimulator::reset() {
  state_ = env_->sample_initial(rng_);
  steps_ = 0;
  return env_->sample_obs(state_, rng_);
}

StepResult PomdpSimulator::step(std::size_t action) {
  const PomdpSpec& spec = env_->spec();
  if (action >= spec.nactions) throw std::out_of_range("invalid action");
  const std::size_t x2 = env_->sample_next(action, state_, rng_);
  StepResult r;
  r.reward = spec.trans_reward(action, state_, x2);
  ++steps_;
  const bool terminal =
      spec.episodic() && spec.terminal[x2] != 0;
  const bool timeout =
      spec.max_episode_len > 0 && steps_ >= spec.max_episode_len;
  state_ = x2;
  if (terminal) {
    r.done = true;
    r.obs = 0;  // terminal states emit nothing the caller should use
    return r;
  }
  r.obs = env_->sample_obs(x2, rng_);
  if (!spec.obs_reward.empty()) r.reward += spec.obs_reward[r.obs];
  r.done = timeout;
  return r;
}

Trajectory sample_trajectory(const CompiledEnv& env, Policy policy,
                             std::size_t horizon, std::uint64_t seed) {
  const PomdpSpec& spec = env.spec();
  if (policy.kind == Policy::Kind::Fixed && policy.fixed_action >= spec.nactions)
    throw std::invalid_argument("policy action not available in environment");
  if (horizon < 1 && !spec.episodic())
    throw std::invalid_argument("continuing environments need a horizon");

  PomdpSimulator sim(env, Rng(seed));
  Rng action_rng = Rng::stream(seed, 0x8f1bbcdcu);
  Trajectory traj;
  traj.seed = seed;
  traj.observations.push_back(static_cast<int>(sim.reset()));
  const std::size_t limit =
      spec.episodic()
          ? (spec.max_episode_len > 0 ? spec.max_episode_len
                                      : (horizon > 0 ? horizon : 1))
          : horizon;
  for (std::size_t t = 0; t < limit; ++t) {
    const std::size_t u = policy.kind == Policy::Kind::Fixed
                              ? policy.fixed_action
                              : action_rng.below(spec.nactions);
    const StepResult r = sim.step(u);
    traj.actions.push_back(static_cast<int>(u));
    traj.rewards.push_back(r.reward);
    if (r.done) {
      traj.terminated = spec.episodic() && spec.terminal[sim.state()] != 0;
      break;
    }
    traj.observations.push_back(static_cast<int>(r.obs));
    if (spec.episodic() && horizon > 0 && t + 1 >= horizon) break;
  }
  return traj;
}

}  // namespace memtrace
