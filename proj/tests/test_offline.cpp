#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "memtrace/complexity.hpp"
#include "memtrace/envs.hpp"
#include "memtrace/offline.hpp"
#include "memtrace/rng.hpp"

using namespace memtrace;

namespace {

const ValueRange kUnit{-1.0, 1.0};

// Constant estimator through the window-table path.
std::shared_ptr<WindowTableEstimator> constant_estimator(double c,
                                                         ValueRange range) {
  return std::make_shared<WindowTableEstimator>(0, c, range);
}

std::vector<std::pair<MemoryTrace, double>> tmaze_anchors(
    std::size_t k, const ObservationSpace& space) {
  const auto consts = tmaze_constants(k);
  std::vector<std::pair<MemoryTrace, double>> anchors;
  for (const auto& [h, v] : tmaze_value_table(k, space))
    anchors.emplace_back(trace_of_history(h, consts.lambda, space), v);
  return anchors;
}

MemoryTrace random_trace(Rng& rng, double lambda,
                         const ObservationSpace& space) {
  std::vector<int> obs(1 + rng.below(14));
  for (auto& o : obs) o = static_cast<int>(rng.below(space.size));
  return trace_of_history(History(obs), lambda, space);
}

}  // namespace

TEST_CASE("discounted returns") {
  Trajectory traj;
  traj.rewards = {0.0, 0.0, 0.0};
  CHECK(discounted_return(traj, 0.9, 1e-9) == 0.0);

  Trajectory constant;
  constant.rewards.assign(60, 1.0);
  CHECK(std::abs(discounted_return(constant, 0.5, 1e-9) - 2.0) < 1e-9);

  // Corridor reward lands one step after the junction decision: with k = 2
  // the return from time zero is gamma * terminal reward.
  const CompiledEnv env(tmaze_env(2));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = sample_trajectory(env, tmaze_always_up(), 0, seed);
    CHECK(discounted_return(t, 0.9, 1e-9) ==
          doctest::Approx(0.9 * t.rewards.back()));
  }
}

TEST_CASE("empirical return error basics") {
  const CompiledEnv env(tmaze_env(3));
  const auto data = make_dataset(env, tmaze_always_up(), 64, 0.0, 11);

  SUBCASE("matching the realized return gives zero error") {
    // The true table value is the realized return at every prefix when the
    // discount is zero.
    auto anchors = tmaze_anchors(3, env.spec().space);
    const auto consts = tmaze_constants(3);
    const auto f = lipschitz_extend(anchors, consts.lipschitz, consts.lambda,
                                    env.spec().space, kUnit);
    CHECK(empirical_return_error(*f, data) < 1e-20);
  }

  SUBCASE("constant estimator error matches the direct formula") {
    const double c = 0.3;
    const auto f = constant_estimator(c, kUnit);
    double expect = 0.0;
    for (const auto& traj : data.trajectories) {
      double per = 0.0;
      const std::size_t steps = traj.observations.size();
      for (std::size_t t = 0; t < steps; ++t) {
        const double g = discounted_return(traj, 0.0, 1e-9, t);
        per += 0.5 * (c - g) * (c - g) / static_cast<double>(steps);
      }
      expect += per;
    }
    expect /= static_cast<double>(data.trajectories.size());
    CHECK(empirical_return_error(*f, data) == doctest::Approx(expect));
  }

  SUBCASE("error over halves averages to the full error") {
    Dataset lo = data, hi = data;
    lo.trajectories.assign(data.trajectories.begin(),
                           data.trajectories.begin() + 32);
    hi.trajectories.assign(data.trajectories.begin() + 32,
                           data.trajectories.end());
    const auto f = constant_estimator(0.4, kUnit);
    CHECK(empirical_return_error(*f, data) ==
          doctest::Approx(0.5 * (empirical_return_error(*f, lo) +
                                 empirical_return_error(*f, hi))));
  }
}

TEST_CASE("Monte Carlo return error") {
  SUBCASE("corridor extension achieves zero") {
    for (std::size_t k : {2ul, 5ul, 9ul}) {
      const CompiledEnv env(tmaze_env(k));
      const auto consts = tmaze_constants(k);
      const auto f =
          lipschitz_extend(tmaze_anchors(k, env.spec().space), consts.lipschitz,
                           consts.lambda, env.spec().space, kUnit);
      const auto mc = mc_return_error(*f, env, tmaze_always_up(), 2000, 5, 0.0);
      CHECK(mc.error <= 3.0 * mc.stderror + 1e-12);
    }
  }

  SUBCASE("constant estimator matches the moment identity") {
    const CompiledEnv env(tmaze_env(2));
    const double c = 0.25;
    const auto f = constant_estimator(c, kUnit);
    const std::size_t n = 4000;
    const auto mc = mc_return_error(*f, env, tmaze_always_up(), n, 9, 0.0);
    // Recompute from the sampled returns directly.
    double expect = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto traj = sample_trajectory(env, tmaze_always_up(), 0, 9ull ^ i);
      const std::size_t steps = traj.observations.size();
      for (std::size_t t = 0; t < steps; ++t) {
        const double g = discounted_return(traj, 0.0, 1e-9, t);
        expect += 0.5 * (c - g) * (c - g) / static_cast<double>(steps);
      }
    }
    CHECK(mc.error == doctest::Approx(expect / static_cast<double>(n)));
  }

  SUBCASE("standard error shrinks like the square root of the sample size") {
    const CompiledEnv env(tmaze_env(3));
    const auto f = constant_estimator(0.0, kUnit);
    const auto small = mc_return_error(*f, env, tmaze_always_up(), 1000, 3, 0.0);
    const auto large =
        mc_return_error(*f, env, tmaze_always_up(), 4000, 3, 0.0);
    CHECK(large.stderror < small.stderror * 0.6);
    CHECK(large.stderror > small.stderror * 0.4);
  }
}

TEST_CASE("cover-based empirical risk minimization") {
  const CompiledEnv env(tmaze_env(2));

  SUBCASE("large samples recover the corridor values within the grid") {
    const auto data = make_dataset(env, tmaze_always_up(), 3000, 0.0, 21);
    const double eps = 0.05;
    const auto f = cover_erm(data, {CoverClass::Kind::Window, 2, 0.0, 0.0},
                             eps, kUnit);
    for (const auto& [h, v] : tmaze_value_table(2, env.spec().space))
      CHECK(std::abs(f->value(h) - v) <= eps + 1e-12);
  }

  SUBCASE("erm attains the brute-force optimum over grid assignments") {
    const auto data = make_dataset(env, tmaze_always_up(), 12, 0.0, 31);
    const std::vector<double> grid{-1.0, 0.0, 1.0};
    const auto f = cover_erm(data, {CoverClass::Kind::Window, 1, 0.0, 0.0},
                             0.5, kUnit, grid);
    const double erm_error = empirical_return_error(*f, data);

    // Enumerate every assignment of grid values to the occupied cells.
    std::vector<WindowKey> keys;
    for (const auto& [key, value] : f->cells()) keys.push_back(key);
    REQUIRE(keys.size() <= 6);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < keys.size(); ++i) combos *= grid.size();
    double best = 1e100;
    for (std::size_t code = 0; code < combos; ++code) {
      WindowTableEstimator cand(1, 0.0, kUnit);
      std::size_t rest = code;
      for (const auto& key : keys) {
        cand.set(key, grid[rest % grid.size()]);
        rest /= grid.size();
      }
      best = std::min(best, empirical_return_error(cand, data));
    }
    CHECK(erm_error == doctest::Approx(best));
  }

  SUBCASE("refining the grid never hurts the empirical fit") {
    const auto data = make_dataset(env, tmaze_always_up(), 200, 0.0, 41);
    // Nested grids: same centering, a third of the spacing.
    std::vector<double> coarse, fine;
    for (int i = 0; i < 4; ++i) coarse.push_back(-0.75 + 0.5 * i);
    for (int i = 0; i < 10; ++i) fine.push_back(-0.75 + 0.5 / 3.0 * i);
    const CoverClass klass{CoverClass::Kind::Window, 2, 0.0, 0.0};
    const auto fc = cover_erm(data, klass, 0.25, kUnit, coarse);
    const auto ff = cover_erm(data, klass, 0.25, kUnit, fine);
    CHECK(empirical_return_error(*ff, data) <=
          empirical_return_error(*fc, data) + 1e-12);
  }

  SUBCASE("trace cover cells are truncation keys") {
    const auto data = make_dataset(env, tmaze_always_up(), 50, 0.0, 51);
    const auto consts = tmaze_constants(2);
    const auto f = cover_erm(
        data, {CoverClass::Kind::Trace, 0, consts.lambda, consts.lipschitz},
        0.5, kUnit);
    CHECK(f->window_length() ==
          static_cast<std::size_t>(std::ceil(
              std::log(2.0 * consts.lipschitz / 0.5) /
              std::log(1.0 / consts.lambda))));
  }

  SUBCASE("cell cap is enforced") {
    const auto data = make_dataset(env, tmaze_always_up(), 10, 0.0, 61);
    CHECK_THROWS_AS(cover_erm(data, {CoverClass::Kind::Window, 12, 0.0, 0.0},
                              0.25, kUnit, std::nullopt, 1000),
                    std::length_error);
  }
}

TEST_CASE("grid snapping obeys the cover penalty") {
  // Snapping an estimator to an eps-cover of the value range costs at most
  // eps*delta + eps^2/2 on identical samples.
  const CompiledEnv env(tmaze_env(3));
  const auto consts = tmaze_constants(3);
  const auto f =
      lipschitz_extend(tmaze_anchors(3, env.spec().space), consts.lipschitz,
                       consts.lambda, env.spec().space, kUnit);
  const double eps = 0.3;
  const auto snapped = std::make_shared<SnappedEstimator>(
      f, value_grid(kUnit, eps));
  const auto base = mc_return_error(*f, env, tmaze_always_up(), 2000, 77, 0.0);
  const auto shifted =
      mc_return_error(*snapped, env, tmaze_always_up(), 2000, 77, 0.0);
  CHECK(shifted.error <=
        base.error + eps * kUnit.delta() + eps * eps / 2.0 + 1e-12);
}

TEST_CASE("McShane extension") {
  const auto space = ObservationSpace::make_one_hot(5);

  SUBCASE("single anchor extends to a constant") {
    const MemoryTrace z = trace_of_history(History({2}), 0.5, space);
    const auto f = lipschitz_extend({{z, 0.7}}, 3.0, 0.5, space, kUnit);
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep)
      CHECK(f->value_at_trace(random_trace(rng, 0.5, space)) ==
            doctest::Approx(0.7));
  }

  SUBCASE("midpoint between two unit anchors") {
    const double L = 4.0;
    MemoryTrace a{{0.0, 0.0, 0.0, 0.0, 0.0}, 0.0};
    MemoryTrace b = a;
    b.z[0] = 1.0 / L;  // distance 1/L, values 0 and 1: exactly compatible
    const auto f = lipschitz_extend({{a, 0.0}, {b, 1.0}}, L, 0.0, space,
                                    ValueRange{0.0, 1.0});
    MemoryTrace mid = a;
    mid.z[0] = 0.5 / L;
    CHECK(f->value_at_trace(mid) == doctest::Approx(0.5));
  }

  SUBCASE("incompatible anchors are reported") {
    MemoryTrace a{{0.0, 0.0, 0.0, 0.0, 0.0}, 0.0};
    MemoryTrace b = a;
    b.z[0] = 0.1;
    const auto bad = check_anchor_compatibility({{a, 0.0}, {b, 1.0}}, 2.0);
    REQUIRE(bad.has_value());
    CHECK(bad->first == 0);
    CHECK(bad->second == 1);
    CHECK_THROWS_AS(
        lipschitz_extend({{a, 0.0}, {b, 1.0}}, 2.0, 0.0, space, kUnit),
        std::invalid_argument);
  }

  SUBCASE("corridor anchors are compatible and matched exactly") {
    for (std::size_t k = 2; k <= 12; ++k) {
      const auto env_space = tmaze_env(k).space;
      const auto consts = tmaze_constants(k);
      const auto anchors = tmaze_anchors(k, env_space);
      CHECK_FALSE(
          check_anchor_compatibility(anchors, consts.lipschitz).has_value());
      const auto f = lipschitz_extend(anchors, consts.lipschitz, consts.lambda,
                                      env_space, kUnit);
      for (const auto& [z, v] : anchors)
        CHECK(std::abs(f->value_at_trace(z) - v) < 1e-12);
    }
  }

  SUBCASE("extension is Lipschitz on random trace pairs") {
    const auto env_space = tmaze_env(5).space;
    const auto consts = tmaze_constants(5);
    const auto f = lipschitz_extend(tmaze_anchors(5, env_space),
                                    consts.lipschitz, consts.lambda, env_space,
                                    kUnit);
    Rng rng(123);
    for (int rep = 0; rep < 10000; ++rep) {
      const auto za = random_trace(rng, consts.lambda, env_space);
      const auto zb = random_trace(rng, consts.lambda, env_space);
      CHECK(std::abs(f->value_at_trace(za) - f->value_at_trace(zb)) <=
            consts.lipschitz * trace_distance(za, zb) + 1e-12);
    }
  }
}

TEST_CASE("belief filtering") {
  SUBCASE("pure-noise observations leave the posterior uniform") {
    Rng rng(9);
    for (int rep = 0; rep < 30; ++rep) {
      std::vector<int> obs(1 + rng.below(6));
      for (auto& o : obs) o = static_cast<int>(rng.below(2));
      CHECK(belief_forward({0.2, 0.5}, History(obs)) == doctest::Approx(0.5));
    }
  }
  SUBCASE("memoryless mixing depends only on the newest observation") {
    for (std::size_t code = 0; code < 16; ++code) {
      std::vector<int> obs(4);
      for (std::size_t k = 0; k < 4; ++k)
        obs[k] = static_cast<int>((code >> k) & 1);
      const double b = belief_forward({0.5, 0.2}, History(obs));
      const double single = belief_forward({0.5, 0.2}, History({obs[0]}));
      CHECK(b == doctest::Approx(single));
    }
  }
  SUBCASE("flipping every observation flips the posterior") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<int> obs(1 + rng.below(6)), flipped;
      for (auto& o : obs) o = static_cast<int>(rng.below(2));
      for (int o : obs) flipped.push_back(1 - o);
      const TwoStateParams params{0.3, 0.15};
      CHECK(belief_forward(params, History(obs)) ==
            doctest::Approx(1.0 - belief_forward(params, History(flipped))));
    }
  }
}

TEST_CASE("optimal forgetting factor analysis") {
  SUBCASE("uninformative observations degenerate to the smallest factor") {
    const auto res = lambda_star({0.2, 0.5});
    for (double L : res.required_lipschitz) CHECK(L == doctest::Approx(0.0));
    CHECK(res.lambda_star == doctest::Approx(0.005));
  }
  SUBCASE("slow forgetting wins for persistent states and noisy emissions") {
    const auto res = lambda_star({0.05, 0.4});
    CHECK(res.lambda_star >= 0.5);
  }
  SUBCASE("fast forgetting wins for volatile states and clean emissions") {
    const auto res = lambda_star({0.4, 0.05});
    CHECK(res.lambda_star < 0.5);
  }
}
