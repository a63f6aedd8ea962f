#include "portnav/nn.hpp"

#include <cmath>
#include <string>

#include "portnav/errors.hpp"

namespace portnav::nn {

void MlpGradients::set_zero() {
  for (Matrix& w : weight) w.setZero();
  for (Vector& b : bias) b.setZero();
}

std::vector<ConstParamBlock> MlpGradients::blocks() const {
  std::vector<ConstParamBlock> out;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    out.push_back({weight[i].data(), static_cast<std::size_t>(weight[i].size())});
    out.push_back({bias[i].data(), static_cast<std::size_t>(bias[i].size())});
  }
  return out;
}

std::vector<ParamBlock> MlpGradients::blocks() {
  std::vector<ParamBlock> out;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    out.push_back({weight[i].data(), static_cast<std::size_t>(weight[i].size())});
    out.push_back({bias[i].data(), static_cast<std::size_t>(bias[i].size())});
  }
  return out;
}

Mlp::Mlp(std::vector<int> sizes, std::mt19937_64& rng) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw InvalidConfig("mlp: need at least input and output sizes");
  for (int s : sizes_) {
    if (s < 1) throw InvalidConfig("mlp: layer sizes must be >= 1");
  }
  for (std::size_t i = 1; i < sizes_.size(); ++i) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[i - 1]));
    std::uniform_real_distribution<double> u(-bound, bound);
    DenseLayer layer{Matrix(sizes_[i], sizes_[i - 1]), Vector(sizes_[i])};
    // Explicit loops keep the draw order fixed (column-major, then bias).
    for (Eigen::Index k = 0; k < layer.weight.size(); ++k) layer.weight.data()[k] = u(rng);
    for (Eigen::Index k = 0; k < layer.bias.size(); ++k) layer.bias[k] = u(rng);
    layers_.push_back(std::move(layer));
  }
}

void Mlp::check_input(Eigen::Index rows) const {
  if (layers_.empty()) throw UsageError("mlp: network is not initialised");
  if (rows != sizes_.front()) {
    throw InvalidState("mlp: input has " + std::to_string(rows) + " rows, expected " +
                       std::to_string(sizes_.front()));
  }
}

Matrix Mlp::forward(const Matrix& input) const {
  check_input(input.rows());
  Matrix x = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Matrix z = layers_[i].weight * x;
    z.colwise() += layers_[i].bias;
    if (i + 1 < layers_.size()) z = z.array().tanh().matrix();
    x = std::move(z);
  }
  return x;
}

Matrix Mlp::forward(const Matrix& input, Tape& tape) const {
  check_input(input.rows());
  tape.values.resize(layers_.size() + 1);
  tape.values[0] = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Matrix z = layers_[i].weight * tape.values[i];
    z.colwise() += layers_[i].bias;
    if (i + 1 < layers_.size()) z = z.array().tanh().matrix();
    tape.values[i + 1] = std::move(z);
  }
  return tape.values.back();
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  const Matrix in = Eigen::Map<const Matrix>(input.data(), static_cast<Eigen::Index>(input.size()), 1);
  const Matrix out = forward(in);
  return {out.data(), out.data() + out.size()};
}

Matrix Mlp::backward(const Tape& tape, const Matrix& output_grad, MlpGradients& grads) const {
  if (tape.values.size() != layers_.size() + 1) throw UsageError("mlp: tape does not match network");
  if (output_grad.rows() != sizes_.back() || output_grad.cols() != tape.values.back().cols()) {
    throw InvalidState("mlp: output gradient shape mismatch");
  }
  if (grads.weight.size() != layers_.size()) throw InvalidState("mlp: gradient buffer shape mismatch");
  Matrix delta = output_grad;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Matrix& in = tape.values[i];
    grads.weight[i].noalias() += delta * in.transpose();
    grads.bias[i] += delta.rowwise().sum();
    Matrix prev = layers_[i].weight.transpose() * delta;
    if (i > 0) prev.array() *= (1.0 - in.array().square());
    delta = std::move(prev);
  }
  return delta;
}

MlpGradients Mlp::zero_gradients() const {
  MlpGradients g;
  for (const DenseLayer& l : layers_) {
    g.weight.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
    g.bias.push_back(Vector::Zero(l.bias.size()));
  }
  return g;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

std::vector<ParamBlock> Mlp::blocks() {
  std::vector<ParamBlock> out;
  for (DenseLayer& l : layers_) {
    out.push_back({l.weight.data(), static_cast<std::size_t>(l.weight.size())});
    out.push_back({l.bias.data(), static_cast<std::size_t>(l.bias.size())});
  }
  return out;
}

std::vector<ConstParamBlock> Mlp::blocks() const {
  std::vector<ConstParamBlock> out;
  for (const DenseLayer& l : layers_) {
    out.push_back({l.weight.data(), static_cast<std::size_t>(l.weight.size())});
    out.push_back({l.bias.data(), static_cast<std::size_t>(l.bias.size())});
  }
  return out;
}

void Mlp::polyak_from(const Mlp& online, double tau) {
  if (online.sizes_ != sizes_) throw InvalidState("mlp: polyak update between different shapes");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].weight = tau * online.layers_[i].weight + (1.0 - tau) * layers_[i].weight;
    layers_[i].bias = tau * online.layers_[i].bias + (1.0 - tau) * layers_[i].bias;
  }
}

bool Mlp::all_finite() const {
  for (const DenseLayer& l : layers_) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  }
  return true;
}

AdamState::AdamState(AdamOptions opts, std::span<const ConstParamBlock> shape) : options(opts) {
  for (const ConstParamBlock& b : shape) {
    m.emplace_back(b.size, 0.0);
    v.emplace_back(b.size, 0.0);
  }
}

AdamState::AdamState(AdamOptions opts, const Mlp& net) : AdamState(opts, net.blocks()) {}

void adam_update(std::span<const ParamBlock> params, std::span<const ConstParamBlock> grads, AdamState& s) {
  if (params.size() != grads.size() || params.size() != s.m.size()) {
    throw InvalidState("adam: parameter/gradient/state block counts differ");
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].size != grads[b].size || params[b].size != s.m[b].size()) {
      throw InvalidState("adam: block " + std::to_string(b) + " size mismatch");
    }
  }
  ++s.step;
  const AdamOptions& o = s.options;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(s.step));
  for (std::size_t b = 0; b < params.size(); ++b) {
    double* p = params[b].data;
    const double* g = grads[b].data;
    double* m = s.m[b].data();
    double* v = s.v[b].data();
    for (std::size_t k = 0; k < params[b].size; ++k) {
      m[k] = o.beta1 * m[k] + (1.0 - o.beta1) * g[k];
      v[k] = o.beta2 * v[k] + (1.0 - o.beta2) * g[k] * g[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      p[k] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

void adam_update(Mlp& net, const MlpGradients& grads, AdamState& state) {
  const auto p = net.blocks();
  const auto g = grads.blocks();
  adam_update(std::span<const ParamBlock>(p), std::span<const ConstParamBlock>(g), state);
}

}  // namespace portnav::nn
