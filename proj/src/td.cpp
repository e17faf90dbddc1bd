#include "memtrace/td.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace memtrace {

namespace {

// Rolling feature state over the observation stream.
struct FeatureStream {
  TdFeature feature;
  std::size_t nobs = 0;
  std::vector<double> trace;
  std::deque<int> window;  // most recent first

  FeatureStream(TdFeature f, std::size_t n) : feature(f), nobs(n) {
    trace.assign(nobs, 0.0);
  }

  void push(std::size_t obs) {
    if (feature.kind == FeatureKind::Trace) {
      for (double& v : trace) v *= feature.lambda;
      trace[obs] += 1.0 - feature.lambda;
    } else {
      window.push_front(static_cast<int>(obs));
      if (window.size() > feature.m) window.pop_back();
    }
  }

  std::size_t full_key() const {
    std::size_t key = 0;
    for (std::size_t j = feature.m; j-- > 0;)
      key = key * nobs + static_cast<std::size_t>(window[j]);
    return key;
  }

  double value(const std::vector<double>& w) const {
    switch (feature.kind) {
      case FeatureKind::Trace: {
        double v = 0.0;
        for (std::size_t d = 0; d < nobs; ++d) v += w[d] * trace[d];
        return v;
      }
      case FeatureKind::FullWindow:
        return w[full_key()];
      case FeatureKind::ConcatWindow: {
        double v = 0.0;
        for (std::size_t j = 0; j < feature.m; ++j)
          v += w[j * nobs + static_cast<std::size_t>(window[j])];
        return v;
      }
    }
    return 0.0;
  }

  // w += scale * dvalue/dw
  void add_gradient(std::vector<double>& w, double scale) const {
    switch (feature.kind) {
      case FeatureKind::Trace:
        for (std::size_t d = 0; d < nobs; ++d) w[d] += scale * trace[d];
        break;
      case FeatureKind::FullWindow:
        w[full_key()] += scale;
        break;
      case FeatureKind::ConcatWindow:
        for (std::size_t j = 0; j < feature.m; ++j)
          w[j * nobs + static_cast<std::size_t>(window[j])] += scale;
        break;
    }
  }
};

std::size_t parameter_count(TdFeature f, std::size_t nobs,
                            std::size_t table_cap) {
  switch (f.kind) {
    case FeatureKind::Trace:
      return nobs;
    case FeatureKind::FullWindow: {
      const double count = std::pow(static_cast<double>(nobs),
                                    static_cast<double>(f.m));
      if (count > static_cast<double>(table_cap))
        throw std::length_error("window table exceeds cap");
      return static_cast<std::size_t>(count + 0.5);
    }
    case FeatureKind::ConcatWindow:
      return f.m * nobs;
  }
  return 0;
}

std::size_t return_tail(double gamma, double tol, double rbound) {
  if (gamma == 0.0) return 1;
  return static_cast<std::size_t>(
             std::ceil(std::log(tol * (1.0 - gamma) / std::max(rbound, 1e-12)) /
                       std::log(gamma))) +
         1;
}

// Held-out Monte Carlo return-error estimate of the current weights.
double holdout_return_error(const CompiledEnv& env, const TdConfig& cfg,
                            const std::vector<double>& w) {
  const PomdpSpec& spec = env.spec();
  const std::size_t tail = return_tail(
      cfg.gamma, cfg.return_tol, std::max(std::abs(spec.rmin), std::abs(spec.rmax)));
  const std::size_t n = cfg.eval_points;
  PomdpSimulator sim(env, Rng::stream(cfg.seed, 0x9e3779b9u));
  FeatureStream fs(cfg.feature, spec.nobs);
  fs.push(sim.reset());
  for (std::size_t t = 0; t < cfg.burn_in; ++t) fs.push(sim.step(0).obs);

  std::vector<double> predictions(n);
  std::vector<double> rewards(n + tail);
  for (std::size_t t = 0; t < n + tail; ++t) {
    if (t < n) predictions[t] = fs.value(w);
    const StepResult r = sim.step(0);
    rewards[t] = r.reward;
    fs.push(r.obs);
  }
  double g = 0.0;
  std::vector<double> returns(n + tail);
  for (std::size_t t = n + tail; t-- > 0;) {
    g = rewards[t] + cfg.gamma * g;
    returns[t] = g;
  }
  double err = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double diff = predictions[t] - returns[t];
    err += 0.5 * diff * diff;
  }
  return err / static_cast<double>(n);
}

}  // namespace

TdResult td_run(const CompiledEnv& env, const TdConfig& cfg) {
  const PomdpSpec& spec = env.spec();
  if (spec.episodic())
    throw std::invalid_argument("prediction task expects a continuing environment");
  if (cfg.alpha <= 0.0) throw std::invalid_argument("step size must be positive");
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0))
    throw std::invalid_argument("discount must be in [0, 1)");
  if (cfg.feature.kind != FeatureKind::Trace && cfg.burn_in < cfg.feature.m)
    throw std::invalid_argument("burn-in must fill the window");

  TdResult result;
  result.parameters = parameter_count(cfg.feature, spec.nobs, cfg.table_cap);
  std::vector<double> w(result.parameters, 0.0);

  std::vector<std::size_t> checkpoints = cfg.eval_at;
  if (checkpoints.empty()) checkpoints.push_back(cfg.total_steps);
  std::sort(checkpoints.begin(), checkpoints.end());

  PomdpSimulator sim(env, Rng(cfg.seed));
  FeatureStream fs(cfg.feature, spec.nobs);
  fs.push(sim.reset());
  for (std::size_t t = 0; t < cfg.burn_in; ++t) fs.push(sim.step(0).obs);

  std::size_t next_checkpoint = 0;
  for (std::size_t step = 0; step < cfg.total_steps; ++step) {
    const double v = fs.value(w);
    const StepResult r = sim.step(0);
    FeatureStream next = fs;
    next.push(r.obs);
    const double target = r.reward + cfg.gamma * next.value(w);
    fs.add_gradient(w, cfg.alpha * (target - v));
    fs = std::move(next);

    while (next_checkpoint < checkpoints.size() &&
           step + 1 >= checkpoints[next_checkpoint]) {
      result.curve.push_back(
          {checkpoints[next_checkpoint], holdout_return_error(env, cfg, w)});
      ++next_checkpoint;
    }
  }
  result.weights = std::move(w);
  return result;
}

OracleResult best_return_error(const CompiledEnv& env, TdFeature feature,
                               std::size_t n_samples, std::uint64_t seed,
                               double gamma, std::size_t burn_in,
                               double return_tol) {
  const PomdpSpec& spec = env.spec();
  if (spec.episodic())
    throw std::invalid_argument("prediction task expects a continuing environment");
  const std::size_t tail = return_tail(
      gamma, return_tol, std::max(std::abs(spec.rmin), std::abs(spec.rmax)));

  PomdpSimulator sim(env, Rng(seed));
  FeatureStream fs(feature, spec.nobs);
  fs.push(sim.reset());
  for (std::size_t t = 0; t < burn_in; ++t) fs.push(sim.step(0).obs);

  const bool tabular = feature.kind == FeatureKind::FullWindow;
  const std::size_t dim =
      feature.kind == FeatureKind::Trace ? spec.nobs : feature.m * spec.nobs;
  Eigen::MatrixXd x;
  std::vector<std::size_t> keys;
  if (tabular)
    keys.resize(n_samples);
  else
    x = Eigen::MatrixXd::Zero(n_samples, dim);

  std::vector<double> rewards(n_samples + tail);
  for (std::size_t t = 0; t < n_samples + tail; ++t) {
    if (t < n_samples) {
      if (tabular) {
        keys[t] = fs.full_key();
      } else if (feature.kind == FeatureKind::Trace) {
        for (std::size_t d = 0; d < spec.nobs; ++d) x(t, d) = fs.trace[d];
      } else {
        for (std::size_t j = 0; j < feature.m; ++j)
          x(t, j * spec.nobs + static_cast<std::size_t>(fs.window[j])) = 1.0;
      }
    }
    const StepResult r = sim.step(0);
    rewards[t] = r.reward;
    fs.push(r.obs);
  }
  std::vector<double> returns(n_samples + tail);
  double g = 0.0;
  for (std::size_t t = n_samples + tail; t-- > 0;) {
    g = rewards[t] + gamma * g;
    returns[t] = g;
  }

  // Even timesteps fit, odd timesteps score.
  OracleResult out;
  out.parameters = parameter_count(feature, spec.nobs, std::size_t{1} << 24);
  if (tabular) {
    std::vector<double> sum(out.parameters, 0.0);
    std::vector<double> cnt(out.parameters, 0.0);
    double global_sum = 0.0, global_cnt = 0.0;
    for (std::size_t t = 0; t < n_samples; t += 2) {
      sum[keys[t]] += returns[t];
      cnt[keys[t]] += 1.0;
      global_sum += returns[t];
      global_cnt += 1.0;
    }
    const double global_mean = global_cnt > 0 ? global_sum / global_cnt : 0.0;
    double err = 0.0;
    std::size_t n_test = 0;
    for (std::size_t t = 1; t < n_samples; t += 2) {
      const double pred =
          cnt[keys[t]] > 0 ? sum[keys[t]] / cnt[keys[t]] : global_mean;
      const double diff = pred - returns[t];
      err += 0.5 * diff * diff;
      ++n_test;
    }
    out.error = err / static_cast<double>(n_test);
    return out;
  }

  const std::size_t n_train = (n_samples + 1) / 2;
  Eigen::MatrixXd xt(n_train, dim);
  Eigen::VectorXd yt(n_train);
  for (std::size_t i = 0; i < n_train; ++i) {
    xt.row(i) = x.row(2 * i);
    yt(i) = returns[2 * i];
  }
  Eigen::MatrixXd gram = xt.transpose() * xt;
  Eigen::VectorXd rhs = xt.transpose() * yt;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  Eigen::VectorXd wvec = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !wvec.allFinite() ||
      (gram * wvec - rhs).norm() > 1e-6 * std::max(1.0, rhs.norm())) {
    // Ridge fallback for rank-deficient designs.
    gram.diagonal().array() += 1e-8;
    wvec = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs);
  }
  double err = 0.0;
  std::size_t n_test = 0;
  for (std::size_t t = 1; t < n_samples; t += 2) {
    const double diff = x.row(t).dot(wvec) - returns[t];
    err += 0.5 * diff * diff;
    ++n_test;
  }
  out.error = err / static_cast<double>(n_test);
  return out;
}

}  // namespace memtrace
