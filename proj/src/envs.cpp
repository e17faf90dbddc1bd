#include "memtrace/envs.hpp"

#include <stdexcept>

namespace memtrace {

namespace {

ObservationSpace tmaze_space() {
  auto s = ObservationSpace::make_one_hot(5);
  s.labels = {"a", "b", "o", "x", "y"};
  return s;
}

double up_reward(std::size_t s, std::size_t e) { return s == e ? 1.0 : -1.0; }

}  // namespace

PomdpSpec tmaze_env(std::size_t k) {
  if (k < 1) throw std::invalid_argument("corridor length must be at least 1");
  PomdpSpec env;
  env.name = "tmaze";
  env.space = tmaze_space();
  env.nobs = 5;
  env.nactions = 3;
  // State = (position, start symbol s, junction symbol e), plus one absorber.
  // For k = 1 the start tile is the junction and s stays hidden.
  env.nstates = 4 * k + 1;
  const std::size_t terminal = 4 * k;
  auto sid = [&](std::size_t pos, std::size_t s, std::size_t e) {
    return pos * 4 + s * 2 + e;
  };

  env.initial.assign(env.nstates, 0.0);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t e = 0; e < 2; ++e) env.initial[sid(0, s, e)] = 0.25;

  env.transition.assign(env.nactions * env.nstates * env.nstates, 0.0);
  env.transition_reward.assign(env.nactions * env.nstates * env.nstates, 0.0);
  auto t = [&](std::size_t u, std::size_t x, std::size_t x2) -> double& {
    return env.transition[(u * env.nstates + x) * env.nstates + x2];
  };
  auto tr = [&](std::size_t u, std::size_t x, std::size_t x2) -> double& {
    return env.transition_reward[(u * env.nstates + x) * env.nstates + x2];
  };
  for (std::size_t u = 0; u < env.nactions; ++u) {
    t(u, terminal, terminal) = 1.0;
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t e = 0; e < 2; ++e) {
        for (std::size_t pos = 0; pos + 1 < k; ++pos)
          t(u, sid(pos, s, e), sid(pos + 1, s, e)) = 1.0;
        const std::size_t junction = sid(k - 1, s, e);
        if (u == kTMazeForward) {
          t(u, junction, junction) = 1.0;
        } else {
          t(u, junction, terminal) = 1.0;
          const double up = up_reward(s, e);
          tr(u, junction, terminal) = u == kTMazeUp ? up : -up;
        }
      }
  }

  env.emission.assign(env.nstates * env.nobs, 0.0);
  auto em = [&](std::size_t x, std::size_t y) -> double& {
    return env.emission[x * env.nobs + y];
  };
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t e = 0; e < 2; ++e)
      for (std::size_t pos = 0; pos < k; ++pos) {
        std::size_t y;
        if (pos + 1 == k)
          y = 3 + e;  // x or y
        else if (pos == 0)
          y = s;  // a or b
        else
          y = 2;  // o
        em(sid(pos, s, e), y) = 1.0;
      }
  em(terminal, 2) = 1.0;  // never observed; row must still be stochastic

  env.terminal.assign(env.nstates, 0);
  env.terminal[terminal] = 1;
  env.max_episode_len = 5 * (k + 2) * (k + 2);
  env.gamma = 0.0;
  env.rmin = -1.0;
  env.rmax = 1.0;
  return env;
}

std::optional<double> true_value_tmaze(const History& h, std::size_t k) {
  if (k < 2) throw std::invalid_argument("value table defined for k >= 2");
  const std::size_t len = h.length();
  if (len == 0 || len > k) return std::nullopt;
  const int first = h.at(len - 1);  // oldest observation
  if (first != 0 && first != 1) return std::nullopt;
  const std::size_t mid_until = len == k ? 1 : 0;
  for (std::size_t j = len - 1; j-- > mid_until;)
    if (h.at(j) != 2) return std::nullopt;
  if (len < k) return 0.0;
  const int last = h.at(0);
  if (last != 3 && last != 4) return std::nullopt;
  return up_reward(static_cast<std::size_t>(first),
                   static_cast<std::size_t>(last - 3));
}

std::vector<std::pair<History, double>> tmaze_value_table(
    std::size_t k, const ObservationSpace& space) {
  if (k < 2) throw std::invalid_argument("value table defined for k >= 2");
  std::vector<std::pair<History, double>> rows;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    std::string corridor(i, 'o');
    rows.emplace_back(History::parse("a" + corridor, space), 0.0);
    rows.emplace_back(History::parse("b" + corridor, space), 0.0);
  }
  const std::string corridor(k - 2, 'o');
  rows.emplace_back(History::parse("a" + corridor + "x", space), 1.0);
  rows.emplace_back(History::parse("b" + corridor + "x", space), -1.0);
  rows.emplace_back(History::parse("a" + corridor + "y", space), -1.0);
  rows.emplace_back(History::parse("b" + corridor + "y", space), 1.0);
  return rows;
}

PomdpSpec random_walk_env() {
  constexpr std::size_t n = 1001;
  constexpr std::size_t nobs = 11;
  constexpr int reach = 100;
  constexpr std::size_t center = 500;
  PomdpSpec env;
  env.name = "random_walk";
  env.space = ObservationSpace::make_one_hot(nobs);
  env.nstates = n;
  env.nactions = 1;
  env.nobs = nobs;
  env.gamma = 0.99;
  env.rmin = -1.0;
  env.rmax = 1.0;

  env.initial.assign(n, 0.0);
  env.initial[center] = 1.0;

  env.transition.assign(n * n, 0.0);
  env.transition_reward.assign(n * n, 0.0);
  const double jump = 1.0 / (2.0 * reach);
  for (std::size_t x = 0; x < n; ++x) {
    double* row = &env.transition[x * n];
    for (int d = -reach; d <= reach; ++d) {
      if (d == 0) continue;
      const long long target = static_cast<long long>(x) + d;
      if (target < 0) {
        row[center] += jump;
        env.transition_reward[x * n + center] = -1.0;
      } else if (target >= static_cast<long long>(n)) {
        row[center] += jump;
        env.transition_reward[x * n + center] = 1.0;
      } else {
        row[target] += jump;
      }
    }
  }

  env.emission.assign(n * nobs, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t bracket = nobs * x / n;
    for (std::size_t y = 0; y < nobs; ++y)
      env.emission[x * nobs + y] = 0.5 / nobs + (y == bracket ? 0.5 : 0.0);
  }
  return env;
}

PomdpSpec two_state_hmm(TwoStateParams params) {
  if (!(params.p >= 0.0 && params.p <= 1.0 && params.q >= 0.0 && params.q <= 1.0))
    throw std::invalid_argument("probabilities must be in [0, 1]");
  PomdpSpec env;
  env.name = "two_state";
  auto space = ObservationSpace::make_one_hot(2);
  space.labels = {"0", "1"};
  env.space = space;
  env.nstates = 2;
  env.nactions = 1;
  env.nobs = 2;
  env.gamma = 0.9;
  env.rmin = 0.0;
  env.rmax = 1.0;
  env.initial = {0.5, 0.5};
  env.transition = {1.0 - params.p, params.p, params.p, 1.0 - params.p};
  env.emission = {1.0 - params.q, params.q, params.q, 1.0 - params.q};
  env.obs_reward = {0.0, 1.0};
  return env;
}

}  // namespace memtrace
