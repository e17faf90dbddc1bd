#include "memtrace/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace memtrace {

MlpTensors MlpTensors::zeros_like(const MlpTensors& other) {
  MlpTensors t;
  t.w1 = Eigen::MatrixXd::Zero(other.w1.rows(), other.w1.cols());
  t.w2 = Eigen::MatrixXd::Zero(other.w2.rows(), other.w2.cols());
  t.w3 = Eigen::MatrixXd::Zero(other.w3.rows(), other.w3.cols());
  t.b1 = Eigen::VectorXd::Zero(other.b1.size());
  t.b2 = Eigen::VectorXd::Zero(other.b2.size());
  t.b3 = Eigen::VectorXd::Zero(other.b3.size());
  return t;
}

void MlpTensors::set_zero() {
  w1.setZero();
  w2.setZero();
  w3.setZero();
  b1.setZero();
  b2.setZero();
  b3.setZero();
}

double MlpTensors::squared_norm() const {
  return w1.squaredNorm() + w2.squaredNorm() + w3.squaredNorm() +
         b1.squaredNorm() + b2.squaredNorm() + b3.squaredNorm();
}

void MlpTensors::scale(double s) {
  w1 *= s;
  w2 *= s;
  w3 *= s;
  b1 *= s;
  b2 *= s;
  b3 *= s;
}

void MlpTensors::axpy(double a, const MlpTensors& other) {
  w1 += a * other.w1;
  w2 += a * other.w2;
  w3 += a * other.w3;
  b1 += a * other.b1;
  b2 += a * other.b2;
  b3 += a * other.b3;
}

std::size_t MlpTensors::count() const {
  return static_cast<std::size_t>(w1.size() + w2.size() + w3.size() +
                                  b1.size() + b2.size() + b3.size());
}

double& MlpTensors::flat(std::size_t i) {
  auto piece = [&](auto& m, std::size_t& idx) -> double* {
    if (idx < static_cast<std::size_t>(m.size())) return m.data() + idx;
    idx -= static_cast<std::size_t>(m.size());
    return nullptr;
  };
  std::size_t idx = i;
  if (auto* p = piece(w1, idx)) return *p;
  if (auto* p = piece(b1, idx)) return *p;
  if (auto* p = piece(w2, idx)) return *p;
  if (auto* p = piece(b2, idx)) return *p;
  if (auto* p = piece(w3, idx)) return *p;
  if (auto* p = piece(b3, idx)) return *p;
  throw std::out_of_range("parameter index");
}

Mlp::Mlp(int in, int hidden, int out) {
  params_.w1 = Eigen::MatrixXd::Zero(hidden, in);
  params_.w2 = Eigen::MatrixXd::Zero(hidden, hidden);
  params_.w3 = Eigen::MatrixXd::Zero(out, hidden);
  params_.b1 = Eigen::VectorXd::Zero(hidden);
  params_.b2 = Eigen::VectorXd::Zero(hidden);
  params_.b3 = Eigen::VectorXd::Zero(out);
}

namespace {

Eigen::MatrixXd orthogonal(int rows, int cols, double gain, Rng& rng) {
  const bool tall = rows >= cols;
  const int r = tall ? rows : cols;
  const int c = tall ? cols : rows;
  Eigen::MatrixXd a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(r, c);
  const Eigen::MatrixXd rmat =
      qr.matrixQR().topLeftCorner(c, c).triangularView<Eigen::Upper>();
  for (int j = 0; j < c; ++j)
    if (rmat(j, j) < 0) q.col(j) = -q.col(j);
  q *= gain;
  return tall ? q : Eigen::MatrixXd(q.transpose());
}

}  // namespace

void Mlp::init_orthogonal(Rng& rng, double hidden_gain, double head_gain) {
  params_.w1 = orthogonal(static_cast<int>(params_.w1.rows()),
                          static_cast<int>(params_.w1.cols()), hidden_gain, rng);
  params_.w2 = orthogonal(static_cast<int>(params_.w2.rows()),
                          static_cast<int>(params_.w2.cols()), hidden_gain, rng);
  params_.w3 = orthogonal(static_cast<int>(params_.w3.rows()),
                          static_cast<int>(params_.w3.cols()), head_gain, rng);
  params_.b1.setZero();
  params_.b2.setZero();
  params_.b3.setZero();
}

void Mlp::forward(const Eigen::MatrixXd& x, Cache& cache) const {
  cache.x = x;
  cache.a1 =
      ((x * params_.w1.transpose()).rowwise() + params_.b1.transpose())
          .array()
          .tanh();
  cache.a2 =
      ((cache.a1 * params_.w2.transpose()).rowwise() + params_.b2.transpose())
          .array()
          .tanh();
  cache.out =
      (cache.a2 * params_.w3.transpose()).rowwise() + params_.b3.transpose();
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Cache cache;
  forward(x, cache);
  return cache.out;
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& dout,
                   MlpTensors& grads) const {
  grads.w3 += dout.transpose() * cache.a2;
  grads.b3 += dout.colwise().sum().transpose();
  Eigen::MatrixXd dz2 = (dout * params_.w3).array() *
                        (1.0 - cache.a2.array().square());
  grads.w2 += dz2.transpose() * cache.a1;
  grads.b2 += dz2.colwise().sum().transpose();
  Eigen::MatrixXd dz1 =
      (dz2 * params_.w2).array() * (1.0 - cache.a1.array().square());
  grads.w1 += dz1.transpose() * cache.x;
  grads.b1 += dz1.colwise().sum().transpose();
}

double clip_global_norm(MlpTensors& grads, double max_norm) {
  const double norm = std::sqrt(grads.squared_norm());
  if (norm > max_norm && norm > 0.0) grads.scale(max_norm / norm);
  return norm;
}

double clip_global_norm(MlpTensors& a, MlpTensors& b, double max_norm) {
  const double norm = std::sqrt(a.squared_norm() + b.squared_norm());
  if (norm > max_norm && norm > 0.0) {
    a.scale(max_norm / norm);
    b.scale(max_norm / norm);
  }
  return norm;
}

Adam::Adam(const MlpTensors& like, double beta1, double beta2, double eps)
    : m_(MlpTensors::zeros_like(like)),
      v_(MlpTensors::zeros_like(like)),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {}

void Adam::step(MlpTensors& params, const MlpTensors& grads, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = (beta2_ * v.array() + (1.0 - beta2_) * g.array().square()).matrix();
    p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  };
  update(params.w1, m_.w1, v_.w1, grads.w1);
  update(params.w2, m_.w2, v_.w2, grads.w2);
  update(params.w3, m_.w3, v_.w3, grads.w3);
  update(params.b1, m_.b1, v_.b1, grads.b1);
  update(params.b2, m_.b2, v_.b2, grads.b2);
  update(params.b3, m_.b3, v_.b3, grads.b3);
}

}  // namespace memtrace
