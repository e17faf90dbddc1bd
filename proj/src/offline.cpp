#include "memtrace/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace memtrace {

double discounted_return(const Trajectory& traj, double gamma, double tol,
                         std::size_t from) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("discount must be in [0, 1)");
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  double total = 0.0;
  double weight = 1.0;
  // Remaining tail is below weight * rmax / (1 - gamma); stop once that
  // envelope (per unit reward bound) is under tol.
  const double cutoff = tol * (1.0 - gamma);
  for (std::size_t t = from; t < traj.rewards.size(); ++t) {
    total += weight * traj.rewards[t];
    weight *= gamma;
    if (weight < cutoff) break;
  }
  return total;
}

Dataset make_dataset(const CompiledEnv& env, Policy policy, std::size_t n,
                     double gamma, std::uint64_t base_seed,
                     std::size_t burn_in, double return_tol) {
  if (n == 0) throw std::invalid_argument("dataset must be nonempty");
  const PomdpSpec& spec = env.spec();
  Dataset data;
  data.gamma = gamma;
  data.return_tol = return_tol;
  data.env_name = spec.name;
  data.base_seed = base_seed;
  data.nobs = spec.nobs;
  data.all_prefixes = spec.episodic();

  std::size_t horizon = 0;
  if (!spec.episodic()) {
    const double rbound = std::max(std::abs(spec.rmin), std::abs(spec.rmax));
    const std::size_t tail =
        gamma == 0.0
            ? 1
            : static_cast<std::size_t>(std::ceil(
                  std::log(return_tol * (1.0 - gamma) / std::max(rbound, 1e-12)) /
                  std::log(gamma))) +
                  1;
    horizon = burn_in + tail;
  }
  data.trajectories.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Trajectory traj =
        sample_trajectory(env, policy, horizon, base_seed ^ static_cast<std::uint64_t>(i));
    traj.origin = spec.episodic() ? 0 : burn_in;
    data.trajectories.push_back(std::move(traj));
  }
  return data;
}

namespace {

// Applies fn(time, weight) at each evaluation point of a trajectory.
template <typename Fn>
void for_each_eval_point(const Dataset& data, const Trajectory& traj, Fn fn) {
  if (data.all_prefixes) {
    const std::size_t steps = traj.observations.size();
    const double w = 1.0 / static_cast<double>(steps);
    for (std::size_t t = 0; t < steps; ++t) fn(t, w);
  } else {
    fn(traj.origin, 1.0);
  }
}

double trajectory_score(const ValueEstimator& f, const Dataset& data,
                        const Trajectory& traj) {
  double score = 0.0;
  for_each_eval_point(data, traj, [&](std::size_t t, double w) {
    const double g = discounted_return(traj, data.gamma, data.return_tol, t);
    const double diff = f.value(history_at(traj, t)) - g;
    score += w * 0.5 * diff * diff;
  });
  return score;
}

}  // namespace

double empirical_return_error(const ValueEstimator& f, const Dataset& data) {
  if (data.trajectories.empty()) throw std::invalid_argument("empty dataset");
  double total = 0.0;
  for (const auto& traj : data.trajectories)
    total += trajectory_score(f, data, traj);
  return total / static_cast<double>(data.trajectories.size());
}

McError mc_return_error(const ValueEstimator& f, const CompiledEnv& env,
                        Policy policy, std::size_t n, std::uint64_t seed,
                        double gamma, std::size_t burn_in, double return_tol) {
  const Dataset data =
      make_dataset(env, policy, n, gamma, seed, burn_in, return_tol);
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& traj : data.trajectories) {
    const double xi = trajectory_score(f, data, traj);
    sum += xi;
    sum_sq += xi * xi;
  }
  const double nd = static_cast<double>(n);
  McError out;
  out.n = n;
  out.error = sum / nd;
  const double var = std::max(0.0, (sum_sq / nd - out.error * out.error) *
                                       (n > 1 ? nd / (nd - 1.0) : 0.0));
  out.stderror = std::sqrt(var / nd);
  return out;
}

std::shared_ptr<WindowTableEstimator> cover_erm(
    const Dataset& data, CoverClass klass, double epsilon, ValueRange range,
    std::optional<std::vector<double>> grid_override, std::size_t cell_cap) {
  if (epsilon <= 0.0) throw std::invalid_argument("resolution must be positive");
  std::size_t key_len = 0;
  std::vector<double> grid;
  if (klass.kind == CoverClass::Kind::Window) {
    key_len = klass.m;
    grid = value_grid(range, epsilon);
  } else {
    // Truncation length of the trace cover: the nearest cover point of a
    // trace is the trace of the truncated window, within eps/(2L).
    if (klass.lipschitz <= 0.0)
      throw std::invalid_argument("trace cover needs a positive Lipschitz budget");
    const double raw = std::log(2.0 * klass.lipschitz / epsilon) /
                       std::log(1.0 / klass.lambda);
    key_len = static_cast<std::size_t>(std::max(0.0, std::ceil(raw)));
    grid = value_grid(range, epsilon / 2.0);
  }
  if (grid_override) grid = *grid_override;
  if (grid.empty()) throw std::invalid_argument("empty value grid");
  if (std::pow(static_cast<double>(data.nobs), static_cast<double>(key_len)) >
      static_cast<double>(cell_cap))
    throw std::length_error("cover cell count exceeds cap");

  std::map<WindowKey, std::pair<double, double>> cells;  // weight, weighted sum
  for (const auto& traj : data.trajectories) {
    for_each_eval_point(data, traj, [&](std::size_t t, double w) {
      const double g = discounted_return(traj, data.gamma, data.return_tol, t);
      auto& cell = cells[window_of_history(history_at(traj, t), key_len)];
      cell.first += w;
      cell.second += w * g;
    });
  }

  const double fallback = grid[(grid.size() - 1) / 2];
  auto table = std::make_shared<WindowTableEstimator>(key_len, fallback, range);
  for (const auto& [key, acc] : cells)
    table->set(key, nearest_grid_value(grid, acc.second / acc.first));
  return table;
}

std::optional<std::pair<std::size_t, std::size_t>> check_anchor_compatibility(
    const std::vector<std::pair<MemoryTrace, double>>& anchors, double L,
    double tol) {
  for (std::size_t i = 0; i < anchors.size(); ++i)
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      const double gap = std::abs(anchors[i].second - anchors[j].second);
      const double dist = trace_distance(anchors[i].first, anchors[j].first);
      if (gap > L * dist + tol) return std::make_pair(i, j);
    }
  return std::nullopt;
}

std::shared_ptr<LipschitzEstimator> lipschitz_extend(
    const std::vector<std::pair<MemoryTrace, double>>& anchors, double L,
    double lambda, const ObservationSpace& space, ValueRange range) {
  if (anchors.empty()) throw std::invalid_argument("need at least one anchor");
  if (auto bad = check_anchor_compatibility(anchors, L)) {
    throw std::invalid_argument(
        "anchors " + std::to_string(bad->first) + " and " +
        std::to_string(bad->second) + " violate the Lipschitz budget");
  }
  std::vector<MemoryTrace> zs;
  std::vector<double> vs;
  zs.reserve(anchors.size());
  vs.reserve(anchors.size());
  for (const auto& [z, v] : anchors) {
    zs.push_back(z);
    vs.push_back(v);
  }
  return std::make_shared<LipschitzEstimator>(std::move(zs), std::move(vs), L,
                                              lambda, space, range);
}

double belief_forward(TwoStateParams params, const History& h) {
  const double p = params.p, q = params.q;
  double b = 0.5;  // stationary prior
  for (std::size_t k = h.length(); k-- > 0;) {
    if (k + 1 < h.length()) b = b * (1.0 - p) + (1.0 - b) * p;
    const int o = h.at(k);
    if (o != 0 && o != 1) throw std::invalid_argument("binary history expected");
    const double like1 = o == 1 ? 1.0 - q : q;
    const double like0 = o == 1 ? q : 1.0 - q;
    const double denom = b * like1 + (1.0 - b) * like0;
    // Zero-probability histories carry no information.
    b = denom > 0.0 ? b * like1 / denom : 0.5;
  }
  return b;
}

double next_step_value(TwoStateParams params, const History& h) {
  const double b = belief_forward(params, h);
  const double next1 = b * (1.0 - params.p) + (1.0 - b) * params.p;
  return next1 * (1.0 - params.q) + (1.0 - next1) * params.q;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(199);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = 0.005 + static_cast<double>(i) * 0.005;
  return grid;
}

LambdaStarResult lambda_star(TwoStateParams params, std::size_t horizon,
                             std::vector<double> grid) {
  if (grid.empty()) throw std::invalid_argument("degenerate forgetting grid");
  if (horizon > 20) throw std::invalid_argument("horizon too large to enumerate");
  const auto space = two_state_hmm(params).space;

  const std::size_t count = std::size_t{1} << horizon;
  std::vector<History> histories;
  std::vector<double> values;
  histories.reserve(count);
  values.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<int> digits(horizon);
    for (std::size_t k = 0; k < horizon; ++k)
      digits[k] = static_cast<int>((code >> k) & 1);
    histories.emplace_back(std::move(digits));
    values.push_back(next_step_value(params, histories.back()));
  }

  LambdaStarResult out;
  out.lambdas = std::move(grid);
  out.required_lipschitz.reserve(out.lambdas.size());
  for (double lambda : out.lambdas) {
    std::vector<MemoryTrace> traces;
    traces.reserve(count);
    for (const auto& h : histories)
      traces.push_back(trace_of_history(h, lambda, space));
    double required = 0.0;
    for (std::size_t i = 0; i < count && std::isfinite(required); ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        const double gap = std::abs(values[i] - values[j]);
        if (gap <= 1e-12) continue;
        const double dist = trace_distance(traces[i], traces[j]);
        if (dist < 1e-12) {
          required = std::numeric_limits<double>::infinity();
          break;
        }
        required = std::max(required, gap / dist);
      }
    out.required_lipschitz.push_back(required);
  }

  out.star_index = 0;
  for (std::size_t i = 1; i < out.required_lipschitz.size(); ++i)
    if (out.required_lipschitz[i] < out.required_lipschitz[out.star_index])
      out.star_index = i;  // ties keep the smaller forgetting factor
  out.lambda_star = out.lambdas[out.star_index];
  return out;
}

}  // namespace memtrace
