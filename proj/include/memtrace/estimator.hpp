#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "memtrace/complexity.hpp"
#include "memtrace/history.hpp"
#include "memtrace/observation.hpp"
#include "memtrace/trace.hpp"

namespace memtrace {

// A value estimate as a function of the history; outputs are clamped to the
// declared range.
class ValueEstimator {
 public:
  explicit ValueEstimator(ValueRange range) : range_(range) {}
  virtual ~ValueEstimator() = default;
  double value(const History& h) const { return clamp(raw_value(h)); }
  virtual std::size_t parameter_count() const = 0;
  const ValueRange& range() const { return range_; }

 protected:
  virtual double raw_value(const History& h) const = 0;
  double clamp(double v) const {
    return v < range_.vmin ? range_.vmin : (v > range_.vmax ? range_.vmax : v);
  }

 private:
  ValueRange range_;
};

// Lookup table over length-m window keys.
class WindowTableEstimator : public ValueEstimator {
 public:
  WindowTableEstimator(std::size_t m, double fallback, ValueRange range)
      : ValueEstimator(range), m_(m), fallback_(fallback) {}

  void set(const WindowKey& key, double v) { cells_[key] = v; }
  std::size_t window_length() const { return m_; }
  const std::map<WindowKey, double>& cells() const { return cells_; }
  std::size_t parameter_count() const override { return cells_.size(); }

 protected:
  double raw_value(const History& h) const override {
    auto it = cells_.find(window_of_history(h, m_));
    return it == cells_.end() ? fallback_ : it->second;
  }

 private:
  std::size_t m_;
  double fallback_;
  std::map<WindowKey, double> cells_;
};

// McShane extension of anchor values: f(x) = min_i { v_i + L ||x - z_i|| },
// clamped to the range. Exactly matches every anchor when the anchors are
// L-compatible, and is globally L-Lipschitz.
class LipschitzEstimator : public ValueEstimator {
 public:
  LipschitzEstimator(std::vector<MemoryTrace> anchors,
                     std::vector<double> values, double lipschitz,
                     double lambda, ObservationSpace space, ValueRange range)
      : ValueEstimator(range),
        anchors_(std::move(anchors)),
        values_(std::move(values)),
        lipschitz_(lipschitz),
        lambda_(lambda),
        space_(std::move(space)) {}

  double value_at_trace(const MemoryTrace& z) const;
  double lipschitz() const { return lipschitz_; }
  double lambda() const { return lambda_; }
  std::size_t parameter_count() const override { return values_.size(); }
  const std::vector<MemoryTrace>& anchors() const { return anchors_; }
  const std::vector<double>& anchor_values() const { return values_; }

 protected:
  double raw_value(const History& h) const override {
    return value_at_trace(trace_of_history(h, lambda_, space_));
  }

 private:
  std::vector<MemoryTrace> anchors_;
  std::vector<double> values_;
  double lipschitz_;
  double lambda_;
  ObservationSpace space_;
};

// Linear function of the memory trace vector.
class LinearTraceEstimator : public ValueEstimator {
 public:
  LinearTraceEstimator(double lambda, std::vector<double> weights,
                       ObservationSpace space, ValueRange range)
      : ValueEstimator(range),
        lambda_(lambda),
        weights_(std::move(weights)),
        space_(std::move(space)) {}

  std::size_t parameter_count() const override { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }

 protected:
  double raw_value(const History& h) const override;

 private:
  double lambda_;
  std::vector<double> weights_;
  ObservationSpace space_;
};

// Wraps an estimator and snaps its output to a finite value grid.
class SnappedEstimator : public ValueEstimator {
 public:
  SnappedEstimator(std::shared_ptr<const ValueEstimator> base,
                   std::vector<double> grid)
      : ValueEstimator(base->range()),
        base_(std::move(base)),
        grid_(std::move(grid)) {}

  std::size_t parameter_count() const override {
    return base_->parameter_count();
  }

 protected:
  double raw_value(const History& h) const override;

 private:
  std::shared_ptr<const ValueEstimator> base_;
  std::vector<double> grid_;
};

double nearest_grid_value(std::span<const double> grid, double v);

}  // namespace memtrace
