#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace memtrace {

// Value interval [vmin, vmax] of the estimators under study.
struct ValueRange {
  double vmin = 0.0;
  double vmax = 0.0;
  double delta() const { return vmax - vmin; }
};

// Metric entropy quote in nats. Window classes get the exact value; trace
// classes get two upper bounds (value carries their minimum). log_count and
// per_cell decompose value = exp(log_count) * per_cell, usable when the cell
// count itself overflows.
struct EntropyQuote {
  double epsilon = 0.0;
  double value = 0.0;
  double bound_cover = 0.0;  // route via the length-m trace cover
  double bound_grid = 0.0;   // route via the axis-aligned grid in the slice
  double log_count = 0.0;
  double per_cell = 0.0;
  bool exact = false;
  std::string klass;
};

// Exact window-class entropy |Y|^m * ln ceil(delta / (2 eps)).
EntropyQuote entropy_window(std::size_t m, std::size_t ysize, ValueRange range,
                            double epsilon);

// Both upper bounds for the L-Lipschitz trace class.
EntropyQuote entropy_trace_bounds(double lambda, double L, std::size_t ysize,
                                  ValueRange range, double epsilon);

// Generalization bound: base + delta^2 sqrt((H + ln(2/delta_conf)) / (2n))
// + eps*delta + eps^2/2.
double hoeffding_bound(double entropy_nats, std::size_t n, double delta_conf,
                       ValueRange range, double epsilon, double base_error);

// Lipschitz constant L(m) = delta / (sqrt(2) (1 - 2 lambda) lambda^(m-1))
// under which every length-m window function is a Lipschitz trace function;
// requires lambda < 1/2.
double lipschitz_for_window(std::size_t m, double lambda, ValueRange range);

// Window length m = ceil(ln(L/eps) / ln(1/lambda)) whose truncation
// approximates any L-Lipschitz trace function within eps in sup-norm.
std::size_t window_for_trace(double lambda, double L, double epsilon);

// Constants used by the corridor construction: forgetting factor (k-1)/k,
// Lipschitz budget sqrt(2) e k, and the minimum window able to span the
// corridor.
struct TMazeConstants {
  double lambda = 0.0;
  double lipschitz = 0.0;
  std::size_t min_window = 0;
};
TMazeConstants tmaze_constants(std::size_t k);

// ceil(delta / (2 eps)) points spaced 2*eps, centered in the range; this set
// both eps-covers and 2*eps-packs the interval.
std::vector<double> value_grid(ValueRange range, double cover_eps);

}  // namespace memtrace
