#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "memtrace/geometry.hpp"
#include "memtrace/rng.hpp"

using namespace memtrace;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const double kSqrt2 = std::sqrt(2.0);

// Observation alphabets {0,1}^D without the zero vector (a zero observation
// is indistinguishable from padding).
ObservationSpace binary_cube_space(std::size_t d) {
  std::vector<std::vector<long long>> rows;
  for (long long code = 1; code < (1ll << d); ++code) {
    std::vector<long long> v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = (code >> j) & 1;
    rows.push_back(std::move(v));
  }
  return ObservationSpace::from_integer_vectors(rows);
}

}  // namespace

TEST_CASE("concentration bound on hand-checked pairs") {
  const auto space = ObservationSpace::make_one_hot(2);
  SUBCASE("identical histories") {
    const auto h = History({0, 1, 0});
    const auto r = check_concentration(h, h, 3, 0.5, space);
    CHECK(r.lhs == doctest::Approx(0.0));
    CHECK(r.satisfied);
  }
  SUBCASE("difference at lag two") {
    const auto h = History({0, 0, 0});
    const auto hbar = History({0, 0, 1});
    const auto r = check_concentration(h, hbar, 2, 0.5, space);
    CHECK(r.lhs == doctest::Approx(kSqrt2 * 0.125));
    CHECK(r.rhs == doctest::Approx(kSqrt2 * 0.25));
    CHECK(r.satisfied);
  }
  SUBCASE("window mismatch is rejected") {
    CHECK_THROWS_AS(
        check_concentration(History({0}), History({1}), 1, 0.5, space),
        std::invalid_argument);
  }
}

TEST_CASE("separation bound on hand-checked pairs") {
  const auto space = ObservationSpace::make_one_hot(2);
  SUBCASE("single observations") {
    const auto r =
        check_separation(History({0}), History({1}), 1, 0.25, space);
    CHECK(r.lhs == doctest::Approx(kSqrt2 * 0.75));
    CHECK(r.rhs == doctest::Approx(kSqrt2 * 0.5));
    CHECK(r.satisfied);
  }
  SUBCASE("bound degenerates at one half") {
    const auto r = check_separation(History({0}), History({1}), 1, 0.5, space);
    CHECK(r.rhs == doctest::Approx(0.0));
    CHECK(r.satisfied);
  }
  SUBCASE("slow forgetting is rejected") {
    CHECK_THROWS_AS(check_separation(History({0}), History({1}), 1, 0.6, space),
                    std::invalid_argument);
  }
}

TEST_CASE("both inequalities hold exhaustively for binary alphabets") {
  const auto space = ObservationSpace::make_one_hot(2);
  std::vector<History> histories;
  for (std::size_t len = 0; len <= 8; ++len) {
    for (std::size_t code = 0; code < (std::size_t{1} << len); ++code) {
      std::vector<int> obs(len);
      for (std::size_t k = 0; k < len; ++k)
        obs[k] = static_cast<int>((code >> k) & 1);
      histories.emplace_back(std::move(obs));
    }
  }
  for (double lambda : {0.1, 0.3, 0.45}) {
    std::vector<MemoryTrace> traces;
    traces.reserve(histories.size());
    for (const auto& h : histories)
      traces.push_back(trace_of_history(h, lambda, space));
    const double bound_scale = kSqrt2 * (1.0 - 2.0 * lambda);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < histories.size(); ++i)
      for (std::size_t j = i + 1; j < histories.size(); ++j) {
        std::size_t shared = 0;
        while (histories[i].at(shared) == histories[j].at(shared)) ++shared;
        const double dist = trace_distance(traces[i], traces[j]);
        // Tightest instances: concentration at m = shared, separation at
        // m = shared + 1.
        if (dist > kSqrt2 * std::pow(lambda, static_cast<double>(shared)) + 1e-12)
          ++violations;
        if (dist <
            bound_scale * std::pow(lambda, static_cast<double>(shared)) - 1e-12)
          ++violations;
      }
    CHECK(violations == 0);
  }
}

TEST_CASE("inequalities hold on random larger-alphabet pairs") {
  for (std::size_t ysize : {3u, 5u}) {
    const auto space = ObservationSpace::make_one_hot(ysize);
    Rng rng(55 + ysize);
    for (double lambda : {0.2, 0.45}) {
      for (int rep = 0; rep < 2500; ++rep) {
        std::vector<int> a(1 + rng.below(10)), b(1 + rng.below(10));
        for (auto& o : a) o = static_cast<int>(rng.below(ysize));
        for (auto& o : b) o = static_cast<int>(rng.below(ysize));
        // Force a shared prefix half the time.
        if (rep % 2 == 0)
          for (std::size_t k = 0; k < std::min({a.size(), b.size(),
                                                std::size_t{3}}); ++k)
            b[k] = a[k];
        const History h(a), hbar(b);
        std::size_t shared = 0;
        while (h.at(shared) == hbar.at(shared) &&
               shared <= std::max(a.size(), b.size()))
          ++shared;
        const auto conc = check_concentration(h, hbar, shared, lambda, space);
        CHECK(conc.satisfied);
        if (h.at(shared) != hbar.at(shared)) {
          const auto sep =
              check_separation(h, hbar, shared + 1, lambda, space);
          CHECK(sep.satisfied);
        }
      }
    }
  }
}

TEST_CASE("injectivity scan finds no collision for rational fast/slow factors") {
  for (std::size_t ysize : {2u, 3u}) {
    const auto space = ObservationSpace::make_one_hot(ysize);
    for (double lambda : {1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75})
      CHECK_FALSE(injectivity_scan(space, 5, lambda).has_value());
  }
}

TEST_CASE("irrational fast forgetting stays injective") {
  const auto space = ObservationSpace::make_one_hot(2);
  for (double lambda : {1.0 / std::acos(-1.0), std::sqrt(2.0) / 4.0, 0.45 - 1e-7})
    CHECK_FALSE(injectivity_scan(space, 8, lambda).has_value());
}

TEST_CASE("golden-ratio witness is found") {
  const auto space = ObservationSpace::make_one_hot(2);
  const auto witness = injectivity_scan(space, 3, kGolden);
  REQUIRE(witness.has_value());
  const std::set<History> pair{witness->h, witness->hbar};
  const std::set<History> expected{History({0, 1, 1}), History({1, 0, 0})};
  CHECK(pair == expected);
  CHECK(witness->distance < 1e-9);
}

TEST_CASE("scalar alphabet collides at one half") {
  const auto space = ObservationSpace::from_integer_vectors({{0}, {1}, {2}});
  const auto witness = injectivity_scan(space, 2, 0.5);
  REQUIRE(witness.has_value());
  const std::set<History> pair{witness->h, witness->hbar};
  // Chronological (1, 0) and (0, 2): both average to the same point.
  const std::set<History> expected{History::from_oldest_first({1, 0}),
                                   History::from_oldest_first({0, 2})};
  CHECK(pair == expected);

  const auto exact = injectivity_scan_exact(space, 2, 1, 2);
  REQUIRE(exact.has_value());
  CHECK(std::set<History>{exact->h, exact->hbar} == expected);
}

TEST_CASE("exact arithmetic confirms float verdicts for small denominators") {
  for (std::size_t ysize : {2u, 3u}) {
    const auto space = ObservationSpace::make_one_hot(ysize);
    const std::size_t max_len = ysize == 2 ? 8 : 6;
    for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {2, 3}, {3, 4}, {1, 4}}) {
      const double lambda = static_cast<double>(p) / q;
      const bool float_hit =
          injectivity_scan(space, max_len, lambda).has_value();
      const bool exact_hit =
          injectivity_scan_exact(space, max_len, p, q).has_value();
      CHECK(float_hit == exact_hit);
      CHECK_FALSE(exact_hit);
    }
  }
}

TEST_CASE("binary 0-1 alphabets stay injective for non-integer rationals") {
  for (std::size_t d : {2u, 3u}) {
    const auto space = binary_cube_space(d);
    for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {2, 3}, {3, 4}})
      CHECK_FALSE(injectivity_scan_exact(space, 5, p, q).has_value());
  }
}

TEST_CASE("fractal dimension formula") {
  CHECK(minkowski_dimension(0.5, 2) == doctest::Approx(1.0));
  CHECK(minkowski_dimension(0.25, 4) == doctest::Approx(1.0));
  CHECK(minkowski_dimension(0.49, 2) < 1.0);
  CHECK(minkowski_dimension(0.0, 5) == 0.0);
  CHECK(minkowski_dimension_capped(0.9, 3) == doctest::Approx(2.0));
  // d < |Y| - 1 whenever lambda < 1/2.
  for (std::size_t ysize = 2; ysize <= 8; ++ysize)
    for (double lambda : {0.1, 0.3, 0.499})
      CHECK(minkowski_dimension(lambda, ysize) <
            static_cast<double>(ysize - 1));
}

TEST_CASE("projected clouds") {
  SUBCASE("three single-step points form an equilateral triangle") {
    const auto pts = fractal_points(1, 0.4, 3, 1);
    REQUIRE(pts.size() == 3);
    auto dist = [&](std::size_t i, std::size_t j) {
      double s = 0.0;
      for (std::size_t d = 0; d < 2; ++d) {
        const double diff = pts[i].coords[d] - pts[j].coords[d];
        s += diff * diff;
      }
      return std::sqrt(s);
    };
    const double side = kSqrt2 * 0.6;
    CHECK(dist(0, 1) == doctest::Approx(side));
    CHECK(dist(0, 2) == doctest::Approx(side));
    CHECK(dist(1, 2) == doctest::Approx(side));
  }

  SUBCASE("depth-two clusters center on the depth-one points") {
    const double lambda = 0.25;
    const auto coarse = fractal_points(1, lambda, 3, 1);
    const auto fine = fractal_points(2, lambda, 3, 1);
    REQUIRE(fine.size() == 9);
    for (const auto& c : coarse) {
      double mean[2] = {0.0, 0.0};
      std::size_t count = 0;
      for (const auto& f : fine)
        if (f.key == c.key) {
          mean[0] += f.coords[0];
          mean[1] += f.coords[1];
          ++count;
        }
      REQUIRE(count == 3);
      CHECK(mean[0] / 3.0 == doctest::Approx(c.coords[0]).epsilon(1e-12));
      CHECK(mean[1] / 3.0 == doctest::Approx(c.coords[1]).epsilon(1e-12));
    }
  }

  SUBCASE("clusters touch as forgetting reaches one half") {
    // Minimum distance across distinct current-observation clusters is
    // sqrt(2) * 2^-m at lambda = 1/2: the triangles just touch.
    for (std::size_t m : {5u, 6u, 7u}) {
      const auto pts = fractal_points(m, 0.5, 3, 1);
      double best = 1e9;
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
          if (pts[i].key == pts[j].key) continue;
          double s = 0.0;
          for (std::size_t d = 0; d < 2; ++d) {
            const double diff = pts[i].coords[d] - pts[j].coords[d];
            s += diff * diff;
          }
          best = std::min(best, std::sqrt(s));
        }
      CHECK(best ==
            doctest::Approx(kSqrt2 * std::pow(0.5, static_cast<double>(m)))
                .epsilon(1e-9));
    }
  }

  SUBCASE("unsupported dimension is rejected") {
    CHECK_THROWS_AS(fractal_points(2, 0.3, 5, 1), std::invalid_argument);
  }
}
