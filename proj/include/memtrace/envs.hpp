#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "memtrace/pomdp.hpp"

namespace memtrace {

// Corridor memory task. Observations {a, b, o, x, y}; actions
// {forward, up, down}. The first tile reveals a or b, the junction tile
// (time k-1) reveals x or y, and the junction action decides the terminal
// reward: up pays +1 when the first and last symbols agree (a with x, b with
// y) and -1 otherwise; down pays the opposite. The corridor advances one
// tile per step no matter the action; loitering at the junction (forward)
// runs into the episode cap of 5(k+2)^2 steps with reward 0.
//
// The declared discount is 0: with the reward arriving alongside the final
// observation, every positive-probability history then has a deterministic
// return equal to the table value of the always-up policy.
PomdpSpec tmaze_env(std::size_t k);

inline constexpr std::size_t kTMazeForward = 0;
inline constexpr std::size_t kTMazeUp = 1;
inline constexpr std::size_t kTMazeDown = 2;

inline Policy tmaze_always_up() { return Policy::fixed(kTMazeUp); }

// Value function of the always-up policy, defined on positive-probability
// histories only (chronological pattern a|b, o..o, optional x|y); nullopt
// marks unreachable histories.
std::optional<double> true_value_tmaze(const History& h, std::size_t k);

// The (history, value) rows of that table: prefixes at 0 and the four full
// corridors at +/-1. Requires k >= 2.
std::vector<std::pair<History, double>> tmaze_value_table(
    std::size_t k, const ObservationSpace& space);

// 1001-state noisy random walk: uniform jumps among the 100 neighbors on
// each side, with overflow mass redirected to the center state 500 carrying
// reward +1 (right edge) or -1 (left edge). Observations are the 11 coarse
// brackets floor(11 x / 1001), reported with probability 1/2, otherwise a
// uniformly random bracket.
PomdpSpec random_walk_env();

struct TwoStateParams {
  double p = 0.0;  // transition flip probability
  double q = 0.0;  // emission error probability
};

// Symmetric two-state chain with one-hot observations {0, 1}; the reward is
// the observation index (any non-constant choice gives the same analysis).
PomdpSpec two_state_hmm(TwoStateParams params);

}  // namespace memtrace
