#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "memtrace/rng.hpp"

namespace memtrace {

// Parameter/gradient bundle for the two-hidden-layer network below.
struct MlpTensors {
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;

  static MlpTensors zeros_like(const MlpTensors& other);
  void set_zero();
  double squared_norm() const;
  void scale(double s);
  void axpy(double a, const MlpTensors& other);  // this += a * other
  std::size_t count() const;
  double& flat(std::size_t i);  // test access across tensors, fixed order
};

// Two hidden tanh layers with a linear head.
class Mlp {
 public:
  Mlp(int in, int hidden, int out);

  // Orthogonal weight init (QR sign-fixed), zero biases.
  void init_orthogonal(Rng& rng, double hidden_gain, double head_gain);

  struct Cache {
    Eigen::MatrixXd x, a1, a2, out;  // batch rows
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  void forward(const Eigen::MatrixXd& x, Cache& cache) const;

  // Accumulates dLoss/dparams into grads given dLoss/doutput.
  void backward(const Cache& cache, const Eigen::MatrixXd& dout,
                MlpTensors& grads) const;

  MlpTensors& params() { return params_; }
  const MlpTensors& params() const { return params_; }
  int input_dim() const { return static_cast<int>(params_.w1.cols()); }
  int output_dim() const { return static_cast<int>(params_.w3.rows()); }

 private:
  MlpTensors params_;
};

// Scales grads so their global norm is at most max_norm; returns the norm
// before clipping.
double clip_global_norm(MlpTensors& grads, double max_norm);
double clip_global_norm(MlpTensors& a, MlpTensors& b, double max_norm);

class Adam {
 public:
  explicit Adam(const MlpTensors& like, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-5);
  void step(MlpTensors& params, const MlpTensors& grads, double lr);

 private:
  MlpTensors m_, v_;
  double beta1_, beta2_, eps_;
  long long t_ = 0;
};

}  // namespace memtrace
