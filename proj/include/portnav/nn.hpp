#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace portnav::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Contiguous run of parameters (or gradients) owned by a network.
struct ParamBlock {
  double* data;
  std::size_t size;
};

struct ConstParamBlock {
  const double* data;
  std::size_t size;
};

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

struct MlpGradients {
  std::vector<Matrix> weight;
  std::vector<Vector> bias;

  void set_zero();
  std::vector<ConstParamBlock> blocks() const;
  std::vector<ParamBlock> blocks();
};

/// Dense network with tanh hidden layers and a linear output layer. Batches are
/// column-major: an input batch is (input_size x batch).
class Mlp {
 public:
  /// Activations cached by a forward pass; values[0] is the input and
  /// values[i] the output of layer i (after tanh for hidden layers).
  struct Tape {
    std::vector<Matrix> values;
  };

  Mlp() = default;
  /// Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  Mlp(std::vector<int> sizes, std::mt19937_64& rng);

  const std::vector<int>& sizes() const noexcept { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t layer_count() const { return layers_.size(); }
  DenseLayer& layer(std::size_t i) { return layers_[i]; }
  const DenseLayer& layer(std::size_t i) const { return layers_[i]; }

  Matrix forward(const Matrix& input) const;
  Matrix forward(const Matrix& input, Tape& tape) const;
  std::vector<double> forward(std::span<const double> input) const;

  /// Accumulates d(sum(output .* output_grad))/d(params) into `grads` and
  /// returns the gradient with respect to the input batch.
  Matrix backward(const Tape& tape, const Matrix& output_grad, MlpGradients& grads) const;

  MlpGradients zero_gradients() const;

  std::size_t parameter_count() const;
  std::vector<ParamBlock> blocks();
  std::vector<ConstParamBlock> blocks() const;

  /// target <- tau * online + (1 - tau) * target, element-wise.
  void polyak_from(const Mlp& online, double tau);

  bool all_finite() const;

 private:
  void check_input(Eigen::Index rows) const;

  std::vector<int> sizes_;
  std::vector<DenseLayer> layers_;
};

struct AdamOptions {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment accumulators, one flat array per parameter block.
struct AdamState {
  AdamOptions options;
  long step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  AdamState() = default;
  AdamState(AdamOptions opts, std::span<const ConstParamBlock> shape);
  AdamState(AdamOptions opts, const Mlp& net);
};

/// One bias-corrected Adam step over matching parameter and gradient blocks.
void adam_update(std::span<const ParamBlock> params, std::span<const ConstParamBlock> grads, AdamState& state);
void adam_update(Mlp& net, const MlpGradients& grads, AdamState& state);

}  // namespace portnav::nn
