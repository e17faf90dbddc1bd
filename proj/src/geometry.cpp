#include "memtrace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace memtrace {

namespace {

constexpr double kMarginTol = 1e-12;

// Largest m with win_m(h) == win_m(hbar); SIZE_MAX when the histories agree
// at every lag (identical after 0-padding).
std::size_t shared_window_length(const History& h, const History& hbar) {
  const std::size_t n = std::max(h.length(), hbar.length());
  for (std::size_t k = 0; k < n; ++k)
    if (h.at(k) != hbar.at(k)) return k;
  return static_cast<std::size_t>(-1);
}

}  // namespace

MarginReport check_concentration(const History& h, const History& hbar,
                                 std::size_t m, double lambda,
                                 const ObservationSpace& space) {
  if (!space.one_hot)
    throw std::invalid_argument("concentration bound assumes one-hot observations");
  if (shared_window_length(h, hbar) < m)
    throw std::invalid_argument("histories must share the length-m window");
  MarginReport r{h, hbar, m, 0.0, 0.0, false};
  r.lhs = trace_distance(trace_of_history(h, lambda, space),
                         trace_of_history(hbar, lambda, space));
  r.rhs = std::sqrt(2.0) * std::pow(lambda, static_cast<double>(m));
  r.satisfied = r.lhs <= r.rhs + kMarginTol;
  return r;
}

MarginReport check_separation(const History& h, const History& hbar,
                              std::size_t m, double lambda,
                              const ObservationSpace& space) {
  if (!space.one_hot)
    throw std::invalid_argument("separation bound assumes one-hot observations");
  if (lambda > 0.5)
    throw std::invalid_argument("separation bound requires lambda <= 1/2");
  if (m == 0 || shared_window_length(h, hbar) >= m)
    throw std::invalid_argument("length-m windows must differ");
  MarginReport r{h, hbar, m, 0.0, 0.0, false};
  r.lhs = trace_distance(trace_of_history(h, lambda, space),
                         trace_of_history(hbar, lambda, space));
  r.rhs = std::sqrt(2.0) * (1.0 - 2.0 * lambda) *
          std::pow(lambda, static_cast<double>(m) - 1.0);
  r.satisfied = r.lhs >= r.rhs - kMarginTol;
  return r;
}

namespace {

// All histories of length 0..max_len as digit vectors (most recent first),
// ordered by length then lexicographically.
std::vector<std::vector<int>> all_histories(std::size_t ysize,
                                            std::size_t max_len,
                                            std::uint64_t cap) {
  std::uint64_t total = 1;  // empty history
  std::uint64_t level = 1;
  for (std::size_t len = 1; len <= max_len; ++len) {
    level *= ysize;
    total += level;
    if (total > cap) throw std::length_error("injectivity scan exceeds cap");
  }
  std::vector<std::vector<int>> out;
  out.reserve(total);
  out.emplace_back();
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<int> digits(len, 0);
    while (true) {
      out.push_back(digits);
      std::size_t pos = 0;
      while (pos < len && ++digits[pos] == static_cast<int>(ysize)) {
        digits[pos] = 0;
        ++pos;
      }
      if (pos == len) break;
    }
  }
  return out;
}

}  // namespace

std::optional<CollisionWitness> injectivity_scan(const ObservationSpace& space,
                                                 std::size_t max_len,
                                                 double lambda,
                                                 const ScanOptions& opts) {
  const auto histories = all_histories(space.size, max_len, opts.max_histories);
  std::vector<MemoryTrace> traces;
  traces.reserve(histories.size());
  for (const auto& d : histories)
    traces.push_back(trace_of_history(History(d), lambda, space));
  for (std::size_t i = 0; i < traces.size(); ++i)
    for (std::size_t j = i + 1; j < traces.size(); ++j) {
      const double dist = trace_distance(traces[i], traces[j]);
      if (dist < opts.tol)
        return CollisionWitness{History(histories[i]), History(histories[j]),
                                lambda, dist};
    }
  return std::nullopt;
}

std::optional<CollisionWitness> injectivity_scan_exact(
    const ObservationSpace& space, std::size_t max_len, long long p,
    long long q, const ScanOptions& opts) {
  if (!space.integral())
    throw std::invalid_argument("exact scan needs integer observation coordinates");
  if (q <= 0 || p <= 0 || p >= q)
    throw std::invalid_argument("forgetting factor must be p/q in (0, 1)");

  // Scaled trace q^(max_len-1) * sum_k (p/q)^k y_{-k} is an integer vector;
  // equal vectors mean equal traces, exactly. Guard the coefficient range.
  long long coeff_bound = 1;
  for (std::size_t k = 0; k + 1 < std::max<std::size_t>(max_len, 1); ++k) {
    if (coeff_bound > (1ll << 50) / std::max(p, q))
      throw std::overflow_error("exact scan coefficients exceed integer range");
    coeff_bound *= std::max(p, q);
  }

  const auto histories = all_histories(space.size, max_len, opts.max_histories);
  std::vector<long long> coeff(std::max<std::size_t>(max_len, 1));
  {  // coeff[k] = p^k q^(max_len-1-k)
    long long v = 1;
    for (std::size_t k = 0; k + 1 < coeff.size(); ++k) v *= q;
    coeff[0] = v;
    for (std::size_t k = 1; k < coeff.size(); ++k) coeff[k] = coeff[k - 1] / q * p;
  }

  std::vector<std::pair<std::vector<long long>, std::size_t>> keyed;
  keyed.reserve(histories.size());
  for (std::size_t i = 0; i < histories.size(); ++i) {
    std::vector<long long> v(space.dim, 0);
    for (std::size_t k = 0; k < histories[i].size(); ++k) {
      auto obs = space.ivec(static_cast<std::size_t>(histories[i][k]));
      for (std::size_t d = 0; d < space.dim; ++d) v[d] += coeff[k] * obs[d];
    }
    keyed.emplace_back(std::move(v), i);
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i + 1 < keyed.size(); ++i) {
    if (keyed[i].first == keyed[i + 1].first) {
      const auto a = std::min(keyed[i].second, keyed[i + 1].second);
      const auto b = std::max(keyed[i].second, keyed[i + 1].second);
      return CollisionWitness{History(histories[a]), History(histories[b]),
                              static_cast<double>(p) / static_cast<double>(q),
                              0.0};
    }
  }
  return std::nullopt;
}

double minkowski_dimension(double lambda, std::size_t ysize) {
  if (ysize < 2) throw std::invalid_argument("need at least two observations");
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("forgetting factor must be in [0, 1)");
  if (lambda == 0.0) return 0.0;
  return std::log(static_cast<double>(ysize)) / std::log(1.0 / lambda);
}

double minkowski_dimension_capped(double lambda, std::size_t ysize) {
  return std::min(static_cast<double>(ysize - 1),
                  minkowski_dimension(lambda, ysize));
}

std::vector<double> subspace_basis(std::size_t ysize) {
  const std::size_t n = ysize;
  std::vector<std::vector<double>> basis;
  std::vector<double> ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
  basis.push_back(ones);
  for (std::size_t cand = 0; cand < n && basis.size() < n; ++cand) {
    std::vector<double> v(n, 0.0);
    v[cand] = 1.0;
    for (const auto& b : basis) {
      double dot = std::inner_product(v.begin(), v.end(), b.begin(), 0.0);
      for (std::size_t d = 0; d < n; ++d) v[d] -= dot * b[d];
    }
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm > 1e-12) {
      for (double& x : v) x /= norm;
      basis.push_back(std::move(v));
    }
  }
  std::vector<double> rows;
  rows.reserve((n - 1) * n);
  for (std::size_t i = 1; i < basis.size(); ++i)
    rows.insert(rows.end(), basis[i].begin(), basis[i].end());
  return rows;
}

std::vector<ProjectedPoint> fractal_points(std::size_t m, double lambda,
                                           std::size_t ysize,
                                           std::size_t key_len) {
  if (ysize != 3 && ysize != 4)
    throw std::invalid_argument("projection export supports |Y| in {3, 4}");
  const auto space = ObservationSpace::make_one_hot(ysize);
  const auto basis = subspace_basis(ysize);
  const double count = std::pow(static_cast<double>(ysize),
                                static_cast<double>(m));
  if (count > static_cast<double>(TraceSetOptions{}.cap))
    throw std::length_error("trace enumeration exceeds cap");
  const std::uint64_t n = static_cast<std::uint64_t>(count + 0.5);

  std::vector<ProjectedPoint> out;
  out.reserve(n);
  std::vector<int> digits(m, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const History h(digits);
    const auto trace = trace_of_history(h, lambda, space);
    ProjectedPoint pt;
    pt.coords.resize(ysize - 1);
    for (std::size_t r = 0; r < ysize - 1; ++r)
      pt.coords[r] = std::inner_product(trace.z.begin(), trace.z.end(),
                                        basis.begin() + r * ysize, 0.0);
    pt.key = window_of_history(h, key_len);
    out.push_back(std::move(pt));
    for (std::size_t pos = 0; pos < m; ++pos) {
      if (++digits[pos] < static_cast<int>(ysize)) break;
      digits[pos] = 0;
    }
  }
  return out;
}

}  // namespace memtrace
