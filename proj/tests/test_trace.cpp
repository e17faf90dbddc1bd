#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "memtrace/rng.hpp"
#include "memtrace/trace.hpp"

using namespace memtrace;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

History random_history(Rng& rng, std::size_t max_len, std::size_t ysize) {
  std::vector<int> obs(rng.below(max_len + 1));
  for (auto& o : obs) o = static_cast<int>(rng.below(ysize));
  return History(std::move(obs));
}

}  // namespace

TEST_CASE("single update from the zero trace") {
  const auto space = ObservationSpace::make_one_hot(2);
  const auto z = trace_update(zero_trace(0.5, space), 1, space);
  CHECK(z.z[0] == doctest::Approx(0.0));
  CHECK(z.z[1] == doctest::Approx(0.5));
}

TEST_CASE("lambda zero keeps only the current observation") {
  const auto space = ObservationSpace::make_one_hot(3);
  MemoryTrace z{{0.3, 0.3, 0.4}, 0.0};
  const auto z2 = trace_update(z, 0, space);
  CHECK(z2.z[0] == doctest::Approx(1.0));
  CHECK(z2.z[1] == doctest::Approx(0.0));
  CHECK(z2.z[2] == doctest::Approx(0.0));
  CHECK(z.z[0] == doctest::Approx(0.3));  // input unchanged
}

TEST_CASE("update rejects out-of-range observations") {
  const auto space = ObservationSpace::make_one_hot(2);
  CHECK_THROWS_AS(trace_update(zero_trace(0.5, space), 2, space),
                  std::out_of_range);
}

TEST_CASE("iterated updates equal the closed form") {
  const auto space = ObservationSpace::make_one_hot(2);
  // Chronological a, o, o with a=0, o=1.
  const auto h = History::from_oldest_first({0, 1, 1});
  auto z = zero_trace(0.5, space);
  z = trace_update(z, 0, space);
  z = trace_update(z, 1, space);
  z = trace_update(z, 1, space);
  const auto direct = trace_of_history(h, 0.5, space);
  CHECK(trace_distance(z, direct) < 1e-15);
}

TEST_CASE("recursion and closed form agree on random histories") {
  for (std::size_t ysize : {2u, 3u, 4u}) {
    const auto space = ObservationSpace::make_one_hot(ysize);
    Rng rng(1234 + ysize);
    for (double lambda : {0.0, 0.25, 0.5, 0.75}) {
      for (int rep = 0; rep < 200; ++rep) {
        const auto h = random_history(rng, 12, ysize);
        auto z = zero_trace(lambda, space);
        for (std::size_t k = h.length(); k-- > 0;)
          z = trace_update(z, static_cast<std::size_t>(h.at(k)), space);
        CHECK(trace_distance(z, trace_of_history(h, lambda, space)) < 1e-12);
      }
    }
  }
}

TEST_CASE("component sum is 1 - lambda^m for one-hot histories") {
  const auto space = ObservationSpace::make_one_hot(2);
  const auto h = History::from_oldest_first({0, 1, 0});
  CHECK(std::abs(trace_of_history(h, 0.5, space).sum() - 0.875) < 1e-12);

  Rng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const auto hr = random_history(rng, 12, 2);
    const double expect =
        1.0 - std::pow(0.3, static_cast<double>(hr.length()));
    CHECK(std::abs(trace_of_history(hr, 0.3, space).sum() - expect) < 1e-12);
  }
}

TEST_CASE("empty history maps to the zero vector") {
  const auto space = ObservationSpace::make_one_hot(4);
  const auto z = trace_of_history(History(), 0.7, space);
  for (double v : z.z) CHECK(v == 0.0);
}

TEST_CASE("padding the old end never changes the trace") {
  const auto space = ObservationSpace::make_one_hot(3);
  Rng rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const auto h = random_history(rng, 8, 3);
    const auto base = trace_of_history(h, 0.6, space);
    const auto padded =
        trace_of_window(window_of_history(h, h.length() + 3), 0.6, space);
    for (std::size_t d = 0; d < space.dim; ++d)
      CHECK(base.z[d] == padded.z[d]);  // bit-identical
  }
}

TEST_CASE("golden-ratio forgetting collides two histories") {
  const auto space = ObservationSpace::make_one_hot(2);
  const auto h1 = History({0, 1, 1});  // (y1, y2, y2), most recent first
  const auto h2 = History({1, 0, 0});
  const auto z1 = trace_of_history(h1, kGolden, space);
  const auto z2 = trace_of_history(h2, kGolden, space);
  CHECK(trace_distance(z1, z2) < 1e-12);
}

TEST_CASE("window truncation and padding") {
  const auto space = ObservationSpace::make_one_hot(3);
  const auto h = History({0, 1, 2});
  const auto w2 = window_of_history(h, 2);
  CHECK(w2.ids == std::vector<int>{0, 1});

  const auto w4 = window_of_history(History({0}), 3);
  CHECK(w4.ids == std::vector<int>{0, kPad, kPad});

  CHECK(window_of_history(h, 0).ids.empty());
  CHECK(window_of_history(h, 0) == window_of_history(History({2, 2}), 0));
}

TEST_CASE("enumerated trace sets") {
  SUBCASE("single-step traces are the scaled basis") {
    const auto space = ObservationSpace::make_one_hot(4);
    const auto pts = enumerate_traces(1, 0.3, space);
    REQUIRE(pts.size() == 4);
    for (const auto& p : pts) CHECK(std::abs(p.sum() - 0.7) < 1e-12);
  }
  SUBCASE("eighty-one distinct points at depth four") {
    const auto space = ObservationSpace::make_one_hot(3);
    CHECK(enumerate_traces(4, 0.4, space).size() == 81);
  }
  SUBCASE("golden-ratio collision removes one point") {
    const auto space = ObservationSpace::make_one_hot(2);
    CHECK(enumerate_traces(3, kGolden, space).size() == 7);
  }
  SUBCASE("cap is enforced") {
    const auto space = ObservationSpace::make_one_hot(3);
    TraceSetOptions opts;
    opts.cap = 80;
    CHECK_THROWS_AS(enumerate_traces(4, 0.4, space, opts), std::length_error);
  }
}

TEST_CASE("self-similarity: next depth is the union of shifted copies") {
  const auto space = ObservationSpace::make_one_hot(3);
  const double lambda = 0.35;
  const auto level2 = enumerate_traces(2, lambda, space);
  const auto level3 = enumerate_traces(3, lambda, space);
  REQUIRE(level3.size() == 27);

  std::vector<MemoryTrace> rebuilt;
  for (std::size_t y = 0; y < 3; ++y)
    for (const auto& z : level2) {
      MemoryTrace t{{0.0, 0.0, 0.0}, lambda};
      for (std::size_t d = 0; d < 3; ++d) t.z[d] = lambda * z.z[d];
      t.z[y] += 1.0 - lambda;
      rebuilt.push_back(t);
    }
  REQUIRE(rebuilt.size() == level3.size());
  for (const auto& t : rebuilt) {
    double best = 1e9;
    for (const auto& z : level3) best = std::min(best, trace_distance(t, z));
    CHECK(best < 1e-12);
  }
}
