#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "memtrace/envs.hpp"
#include "memtrace/estimator.hpp"
#include "memtrace/pomdp.hpp"

namespace memtrace {

// A set of independently sampled trajectories with a shared discount. Each
// trajectory is scored at its evaluation points: every within-episode prefix
// (weighted uniformly) for episodic data, or the single origin time for
// continuing data with burn-in.
struct Dataset {
  std::vector<Trajectory> trajectories;
  double gamma = 0.0;
  double return_tol = 1e-9;
  bool all_prefixes = false;
  std::string env_name;
  std::uint64_t base_seed = 0;
  std::size_t nobs = 0;
};

// Truncated discounted return from time `from`; the horizon is chosen so the
// dropped tail is below tol (episodic tails are summed exactly).
double discounted_return(const Trajectory& traj, double gamma, double tol,
                         std::size_t from = 0);

// Builds a dataset of n trajectories. burn_in > 0 shifts the evaluation
// origin for continuing environments; the horizon covers burn-in plus the
// return truncation window.
Dataset make_dataset(const CompiledEnv& env, Policy policy, std::size_t n,
                     double gamma, std::uint64_t base_seed,
                     std::size_t burn_in = 0, double return_tol = 1e-9);

// (1/2n) sum over trajectories of the squared deviation between the
// estimate and the realized return, averaged over each trajectory's
// evaluation points.
double empirical_return_error(const ValueEstimator& f, const Dataset& data);

struct McError {
  double error = 0.0;
  double stderror = 0.0;
  std::size_t n = 0;
};

// Monte Carlo estimate of the expected return error with its standard error;
// deterministic given the seed.
McError mc_return_error(const ValueEstimator& f, const CompiledEnv& env,
                        Policy policy, std::size_t n, std::uint64_t seed,
                        double gamma, std::size_t burn_in = 0,
                        double return_tol = 1e-9);

struct CoverClass {
  enum class Kind { Window, Trace };
  Kind kind = Kind::Window;
  std::size_t m = 0;      // window length (Window)
  double lambda = 0.0;    // forgetting factor (Trace)
  double lipschitz = 0.0; // Lipschitz budget fixing the cover resolution (Trace)
};

// Empirical risk minimization over the finite epsilon-cover of the class.
// Cells are window keys (the trace class uses the truncation length of its
// trace cover); each occupied cell takes the grid value nearest its mean
// observed return, empty cells the middle grid point.
std::shared_ptr<WindowTableEstimator> cover_erm(
    const Dataset& data, CoverClass klass, double epsilon, ValueRange range,
    std::optional<std::vector<double>> grid_override = std::nullopt,
    std::size_t cell_cap = 1u << 22);

// Index pair violating |v_i - v_j| <= L ||z_i - z_j||, if any.
std::optional<std::pair<std::size_t, std::size_t>> check_anchor_compatibility(
    const std::vector<std::pair<MemoryTrace, double>>& anchors, double L,
    double tol = 1e-9);

// McShane extension through the given anchors; throws (naming the violating
// pair) when the anchors are not L-compatible.
std::shared_ptr<LipschitzEstimator> lipschitz_extend(
    const std::vector<std::pair<MemoryTrace, double>>& anchors, double L,
    double lambda, const ObservationSpace& space, ValueRange range);

// Exact filtering posterior P(current state = 1 | h) of the two-state chain.
double belief_forward(TwoStateParams params, const History& h);

// Expected next-step reward given the history; affine in the belief.
double next_step_value(TwoStateParams params, const History& h);

struct LambdaStarResult {
  std::vector<double> lambdas;
  std::vector<double> required_lipschitz;  // inf acts as "infeasible"
  double lambda_star = 0.0;
  std::size_t star_index = 0;
};

// 199 uniform points in [0.005, 0.995].
std::vector<double> default_lambda_grid();

// For each grid forgetting factor, the smallest Lipschitz constant under
// which the exact horizon-limited value function is representable, and the
// grid argmin (ties toward smaller lambda).
LambdaStarResult lambda_star(TwoStateParams params, std::size_t horizon = 4,
                             std::vector<double> grid = default_lambda_grid());

}  // namespace memtrace
