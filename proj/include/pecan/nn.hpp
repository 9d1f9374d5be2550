/*
Copyright 2026 The PECAN Toolkit Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

// Dense networks with hand-written reverse mode. Batches are row-major in
// the sense that each row of a Matrix is one example.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pecan/random.hpp"

namespace pecan::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { kRelu, kTanh, kLinear };

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
  Activation activation = Activation::kLinear;
};

/// Inputs and post-activation outputs of every layer of one forward call.
struct Tape {
  std::vector<Matrix> inputs;
  std::vector<Matrix> outputs;
};

struct LayerGradient {
  Matrix weight;
  Vector bias;
};

struct MlpGradient {
  std::vector<LayerGradient> layers;
};

class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers);

  /// dims has one more entry than activations.
  static Mlp zeros(std::span<const std::size_t> dims, std::span<const Activation> activations);
  /// Weights and biases uniform in +-1/sqrt(fan_in).
  static Mlp random(std::span<const std::size_t> dims, std::span<const Activation> activations, Rng& rng);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t num_layers() const { return layers_.size(); }
  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  /// x is batch x input_dim. Throws kShape on a width mismatch.
  Matrix forward(const Matrix& x, Tape* tape = nullptr) const;

  /// Adds parameter gradients into `grad` and returns dL/dx.
  /// Throws kShape if the tape or dy does not belong to this network.
  Matrix backward(const Tape& tape, const Matrix& dy, MlpGradient& grad) const;

  MlpGradient zero_gradient() const;

 private:
  std::vector<DenseLayer> layers_;
};

struct ForwardResult {
  std::vector<double> y;
  Tape tape;
};

struct BackwardResult {
  MlpGradient grads;
  std::vector<double> dx;
};

ForwardResult mlp_forward(const Mlp& net, std::span<const double> x);
BackwardResult mlp_backward(const Mlp& net, const Tape& tape, std::span<const double> dy);

struct AdamConfig {
  double learning_rate = 0.0008;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One contiguous parameter buffer and its gradient.
struct ParamBlock {
  double* param;
  const double* grad;
  std::size_t size;
};

class AdamState {
 public:
  explicit AdamState(AdamConfig config = {});

  const AdamConfig& config() const { return config_; }
  std::uint64_t step_count() const { return step_; }
  const std::vector<std::vector<double>>& first_moments() const { return m_; }
  const std::vector<std::vector<double>>& second_moments() const { return v_; }

  /// Bias-corrected Adam update of every block. Moments are sized on the
  /// first call; later calls must present the same block sizes (kShape).
  /// Any non-finite gradient aborts before anything is modified (kNumeric).
  void step(std::span<const ParamBlock> blocks);

 private:
  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

/// Convenience for a single flat parameter vector.
void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grads);

/// Appends the blocks of `net` paired with the matching entries of `grad`.
void append_blocks(Mlp& net, const MlpGradient& grad, std::vector<ParamBlock>& out);

struct GumbelConfig {
  double temperature = 1.0;
  std::optional<std::vector<double>> noise;  // replaces sampled noise when set

  void validate() const;  // kConfig unless temperature > 0
};

struct GumbelSample {
  std::vector<double> hard;  // forward value: one-hot
  std::vector<double> soft;  // relaxation used by the backward pass
};

/// Straight-through Gumbel-softmax. With no injected noise, draws from rng;
/// a null rng with no injected noise means zero noise.
GumbelSample gumbel_st(std::span<const double> logits, const GumbelConfig& cfg, Rng* rng);

/// dL/dlogits given dL/d(output), routed through the soft relaxation.
std::vector<double> gumbel_st_backward(std::span<const double> soft, std::span<const double> dout, double temperature);

struct GumbelBatch {
  Matrix hard;
  Matrix soft;
};

/// Standard Gumbel draws, rows x cols.
Matrix sample_gumbel(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Row-wise straight-through sample; a null noise matrix means zero noise.
GumbelBatch gumbel_st(const Matrix& logits, double temperature, const Matrix* noise);
Matrix gumbel_st_backward(const Matrix& soft, const Matrix& dout, double temperature);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> v);

std::vector<double> softmax(std::span<const double> logits);

struct CrossEntropy {
  double loss = 0.0;
  std::vector<double> dlogits;
};

/// -log softmax(logits)[target] and its gradient softmax - onehot(target).
CrossEntropy softmax_ce(std::span<const double> logits, std::size_t target);

}  // namespace pecan::nn
