#include "memtrace/ppo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "memtrace/mlp.hpp"

namespace memtrace {

void gae_advantages(std::span<const double> rewards,
                    std::span<const double> values,
                    std::span<const std::uint8_t> dones, double bootstrap_value,
                    double gamma, double lambda, std::span<double> out) {
  const std::size_t n = rewards.size();
  double carry = 0.0;
  double next_value = bootstrap_value;
  for (std::size_t t = n; t-- > 0;) {
    const double not_done = dones[t] ? 0.0 : 1.0;
    const double delta =
        rewards[t] + gamma * next_value * not_done - values[t];
    carry = delta + gamma * lambda * not_done * carry;
    out[t] = carry;
    next_value = values[t];
  }
}

double clipped_surrogate_dlogp(double logp_new, double logp_old,
                               double advantage, double clip) {
  const double ratio = std::exp(logp_new - logp_old);
  const double unclipped = ratio * advantage;
  const double clipped =
      std::clamp(ratio, 1.0 - clip, 1.0 + clip) * advantage;
  // loss = -min(unclipped, clipped)
  if (unclipped <= clipped) return -advantage * ratio;
  return 0.0;
}

double final_success_rate(const PpoResult& result, double fraction) {
  if (result.episode_success.empty()) return 0.0;
  const std::size_t n = result.episode_success.size();
  const std::size_t tail = std::max<std::size_t>(
      1, static_cast<std::size_t>(static_cast<double>(n) * fraction));
  double sum = 0.0;
  for (std::size_t i = n - tail; i < n; ++i)
    sum += result.episode_success[i];
  return sum / static_cast<double>(tail);
}

namespace {

// Per-environment memory feature writer.
struct MemoryState {
  const PpoConfig* cfg;
  std::size_t nobs;
  std::vector<double> traces;  // one block per forgetting factor
  std::vector<int> stack;      // most recent first

  MemoryState(const PpoConfig& c, std::size_t n) : cfg(&c), nobs(n) { reset(); }

  std::size_t dim() const {
    return cfg->trace_lambdas.empty() ? cfg->frame_stack * nobs
                                      : cfg->trace_lambdas.size() * nobs;
  }

  void reset() {
    traces.assign(cfg->trace_lambdas.size() * nobs, 0.0);
    stack.assign(cfg->frame_stack, -1);
  }

  void push(std::size_t obs) {
    for (std::size_t i = 0; i < cfg->trace_lambdas.size(); ++i) {
      const double lambda = cfg->trace_lambdas[i];
      double* block = traces.data() + i * nobs;
      for (std::size_t d = 0; d < nobs; ++d) block[d] *= lambda;
      block[obs] += 1.0 - lambda;
    }
    if (!stack.empty()) {
      for (std::size_t j = stack.size(); j-- > 1;) stack[j] = stack[j - 1];
      stack[0] = static_cast<int>(obs);
    }
  }

  void write(Eigen::Ref<Eigen::RowVectorXd> row) const {
    row.setZero();
    if (!cfg->trace_lambdas.empty()) {
      for (std::size_t d = 0; d < traces.size(); ++d) row(d) = traces[d];
    } else {
      for (std::size_t j = 0; j < stack.size(); ++j)
        if (stack[j] >= 0)
          row(j * nobs + static_cast<std::size_t>(stack[j])) = 1.0;
    }
  }
};

struct CategoricalSample {
  std::size_t action;
  double logp;
};

CategoricalSample sample_logits(const Eigen::RowVectorXd& logits, Rng& rng) {
  const double zmax = logits.maxCoeff();
  Eigen::RowVectorXd probs = (logits.array() - zmax).exp();
  const double total = probs.sum();
  double u = rng.uniform() * total;
  std::size_t a = static_cast<std::size_t>(logits.size()) - 1;
  for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(logits.size()); ++i) {
    u -= probs(i);
    if (u < 0.0) {
      a = i;
      break;
    }
  }
  return {a, std::log(probs(a) / total)};
}

}  // namespace

PpoResult ppo_train(const CompiledEnv& env, const PpoConfig& cfg) {
  const PomdpSpec& spec = env.spec();
  if (cfg.trace_lambdas.empty() && cfg.frame_stack == 0)
    throw std::invalid_argument("memory configuration is empty");
  for (double lambda : cfg.trace_lambdas)
    if (!(lambda >= 0.0 && lambda < 1.0))
      throw std::invalid_argument("forgetting factor must be in [0, 1)");
  if (!spec.episodic())
    throw std::invalid_argument("control task expects an episodic environment");

  const std::size_t n_envs = cfg.n_envs;
  const std::size_t steps = cfg.steps_per_env;
  const std::size_t batch = n_envs * steps;
  const std::size_t updates =
      std::max<std::size_t>(1, cfg.total_steps / batch);
  const std::size_t nactions = spec.nactions;

  MemoryState proto(cfg, spec.nobs);
  const std::size_t in_dim = proto.dim();

  Rng init_rng(cfg.seed);
  Mlp actor(static_cast<int>(in_dim), static_cast<int>(cfg.hidden),
            static_cast<int>(nactions));
  Mlp critic(static_cast<int>(in_dim), static_cast<int>(cfg.hidden), 1);
  actor.init_orthogonal(init_rng, std::sqrt(2.0), 0.01);
  critic.init_orthogonal(init_rng, std::sqrt(2.0), 1.0);
  Adam actor_opt(actor.params());
  Adam critic_opt(critic.params());

  std::vector<PomdpSimulator> sims;
  std::vector<MemoryState> memory(n_envs, proto);
  std::vector<double> pending_reward(n_envs, 0.0);
  sims.reserve(n_envs);
  for (std::size_t e = 0; e < n_envs; ++e) {
    sims.emplace_back(env, Rng::stream(cfg.seed, 0x10000 + e));
    memory[e].push(static_cast<std::size_t>(sims[e].reset()));
  }
  Rng action_rng = Rng::stream(cfg.seed, 0xAC7104);
  Rng shuffle_rng = Rng::stream(cfg.seed, 0x5481FF);

  PpoResult result;
  Eigen::MatrixXd features(batch, in_dim);
  std::vector<std::size_t> actions(batch);
  std::vector<double> logps(batch), rewards(batch), values(batch),
      advantages(batch), returns(batch);
  std::vector<std::uint8_t> dones(batch);
  Eigen::MatrixXd frame(n_envs, in_dim);

  std::size_t global_step = 0;
  for (std::size_t update = 0; update < updates; ++update) {
    // Rollout.
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t e = 0; e < n_envs; ++e)
        memory[e].write(frame.row(e));
      const Eigen::MatrixXd logits = actor.forward(frame);
      const Eigen::MatrixXd vals = critic.forward(frame);
      for (std::size_t e = 0; e < n_envs; ++e) {
        const std::size_t row = t * n_envs + e;
        features.row(row) = frame.row(e);
        const auto pick = sample_logits(logits.row(e), action_rng);
        actions[row] = pick.action;
        logps[row] = pick.logp;
        values[row] = vals(e, 0);
        const StepResult sr = sims[e].step(pick.action);
        rewards[row] = sr.reward;
        dones[row] = sr.done ? 1 : 0;
        if (sr.done) {
          result.episode_success.push_back(sr.reward > 0.5 ? 1 : 0);
          memory[e].reset();
          memory[e].push(static_cast<std::size_t>(sims[e].reset()));
        } else {
          memory[e].push(sr.obs);
        }
      }
      global_step += n_envs;
    }
    result.episodes = result.episode_success.size();

    // Bootstrap values of the post-rollout states and GAE per env stream.
    for (std::size_t e = 0; e < n_envs; ++e) memory[e].write(frame.row(e));
    const Eigen::MatrixXd boot = critic.forward(frame);
    {
      std::vector<double> seq_r(steps), seq_v(steps), seq_a(steps);
      std::vector<std::uint8_t> seq_d(steps);
      for (std::size_t e = 0; e < n_envs; ++e) {
        for (std::size_t t = 0; t < steps; ++t) {
          const std::size_t row = t * n_envs + e;
          seq_r[t] = rewards[row];
          seq_v[t] = values[row];
          seq_d[t] = dones[row];
        }
        gae_advantages(seq_r, seq_v, seq_d, boot(e, 0), cfg.gamma,
                       cfg.gae_lambda, seq_a);
        for (std::size_t t = 0; t < steps; ++t) {
          const std::size_t row = t * n_envs + e;
          advantages[row] = seq_a[t];
          returns[row] = seq_a[t] + values[row];
        }
      }
    }

    const double lr =
        cfg.lr_decay
            ? cfg.lr * (1.0 - static_cast<double>(update) /
                                  static_cast<double>(updates))
            : cfg.lr;

    // Optimization epochs over shuffled minibatches.
    std::vector<std::size_t> order(batch);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t mb_size = batch / cfg.minibatches;
    MlpTensors actor_grads = MlpTensors::zeros_like(actor.params());
    MlpTensors critic_grads = MlpTensors::zeros_like(critic.params());
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (std::size_t i = batch; i-- > 1;)
        std::swap(order[i], order[shuffle_rng.below(i + 1)]);
      for (std::size_t mb = 0; mb < cfg.minibatches; ++mb) {
        const std::size_t begin = mb * mb_size;
        const std::size_t count = mb == cfg.minibatches - 1
                                      ? batch - begin
                                      : mb_size;
        Eigen::MatrixXd bx(count, in_dim);
        for (std::size_t i = 0; i < count; ++i)
          bx.row(i) = features.row(order[begin + i]);

        double adv_mean = 0.0, adv_std = 1.0;
        if (cfg.normalize_advantages) {
          double s = 0.0, s2 = 0.0;
          for (std::size_t i = 0; i < count; ++i) {
            const double a = advantages[order[begin + i]];
            s += a;
            s2 += a * a;
          }
          adv_mean = s / static_cast<double>(count);
          adv_std = std::sqrt(
              std::max(1e-16, s2 / static_cast<double>(count) -
                                  adv_mean * adv_mean)) + 1e-8;
        }

        Mlp::Cache actor_cache, critic_cache;
        actor.forward(bx, actor_cache);
        critic.forward(bx, critic_cache);
        Eigen::MatrixXd dlogits =
            Eigen::MatrixXd::Zero(count, nactions);
        Eigen::MatrixXd dvalue = Eigen::MatrixXd::Zero(count, 1);
        double loss = 0.0;
        const double inv = 1.0 / static_cast<double>(count);
        for (std::size_t i = 0; i < count; ++i) {
          const std::size_t row = order[begin + i];
          const Eigen::RowVectorXd logits = actor_cache.out.row(i);
          const double zmax = logits.maxCoeff();
          Eigen::RowVectorXd p = (logits.array() - zmax).exp();
          p /= p.sum();
          const double logp_new = std::log(p(actions[row]));
          const double adv = cfg.normalize_advantages
                                 ? (advantages[row] - adv_mean) / adv_std
                                 : advantages[row];
          const double dlogp =
              clipped_surrogate_dlogp(logp_new, logps[row], adv, cfg.clip) * inv;
          // d logp / d logits = onehot(a) - p
          dlogits.row(i) = -dlogp * p;
          dlogits(i, actions[row]) += dlogp;
          const double ratio = std::exp(logp_new - logps[row]);
          loss += inv * -std::min(ratio * adv,
                                  std::clamp(ratio, 1.0 - cfg.clip,
                                             1.0 + cfg.clip) * adv);

          // Entropy bonus: loss += -coef * H, dH/dlogit_j = -p_j (log p_j + H).
          double entropy = 0.0;
          for (std::size_t j = 0; j < nactions; ++j)
            entropy -= p(j) * std::log(std::max(p(j), 1e-300));
          loss -= inv * cfg.entropy_coef * entropy;
          for (std::size_t j = 0; j < nactions; ++j)
            dlogits(i, j) += inv * cfg.entropy_coef * p(j) *
                             (std::log(std::max(p(j), 1e-300)) + entropy);

          const double verr = critic_cache.out(i, 0) - returns[row];
          loss += inv * cfg.value_coef * 0.5 * verr * verr;
          dvalue(i, 0) = inv * cfg.value_coef * verr;
        }
        if (!std::isfinite(loss)) {
          result.diverged = true;
          result.diagnostic = "non-finite loss at update " +
                              std::to_string(update);
          return result;
        }
        actor_grads.set_zero();
        critic_grads.set_zero();
        actor.backward(actor_cache, dlogits, actor_grads);
        critic.backward(critic_cache, dvalue, critic_grads);
        clip_global_norm(actor_grads, critic_grads, cfg.max_grad_norm);
        actor_opt.step(actor.params(), actor_grads, lr);
        critic_opt.step(critic.params(), critic_grads, lr);
      }
    }

    if (!result.episode_success.empty()) {
      const std::size_t window =
          std::min<std::size_t>(100, result.episode_success.size());
      double s = 0.0;
      for (std::size_t i = result.episode_success.size() - window;
           i < result.episode_success.size(); ++i)
        s += result.episode_success[i];
      result.curve.push_back({global_step, s / static_cast<double>(window)});
    }
  }
  result.episodes = result.episode_success.size();
  return result;
}

}  // namespace memtrace
