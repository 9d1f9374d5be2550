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
#include "pecan/nn.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pecan/error.hpp"

namespace pecan::nn {

namespace {

void apply_activation(Matrix& z, Activation act) {
  switch (act) {
    case Activation::kRelu: z = z.cwiseMax(0.0); break;
    case Activation::kTanh: z = z.array().tanh().matrix(); break;
    case Activation::kLinear: break;
  }
}

// dL/dz from dL/da, using the post-activation values a.
Matrix activation_backward(const Matrix& a, const Matrix& da, Activation act) {
  switch (act) {
    case Activation::kRelu: return (a.array() > 0.0).select(da, 0.0);
    case Activation::kTanh: return (da.array() * (1.0 - a.array().square())).matrix();
    case Activation::kLinear: return da;
  }
  return da;
}

Mlp build(std::span<const std::size_t> dims, std::span<const Activation> activations, Rng* rng) {
  if (dims.size() != activations.size() + 1 || activations.empty()) {
    fail(ErrorCode::kConfig, "an MLP needs one more dimension than activations");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < activations.size(); ++l) {
    DenseLayer layer;
    layer.weight = Matrix::Zero(static_cast<Eigen::Index>(dims[l + 1]), static_cast<Eigen::Index>(dims[l]));
    layer.bias = Vector::Zero(static_cast<Eigen::Index>(dims[l + 1]));
    layer.activation = activations[l];
    if (rng) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = uniform(*rng, -bound, bound);
      }
      for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = uniform(*rng, -bound, bound);
    }
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

}  // namespace

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].bias.size() != layers_[l].weight.rows()) {
      fail(ErrorCode::kShape, fmt::format("layer {} bias length does not match its weight rows", l));
    }
    if (l > 0 && layers_[l].weight.cols() != layers_[l - 1].weight.rows()) {
      fail(ErrorCode::kShape, fmt::format("layer {} input width does not chain from layer {}", l, l - 1));
    }
  }
}

Mlp Mlp::zeros(std::span<const std::size_t> dims, std::span<const Activation> activations) {
  return build(dims, activations, nullptr);
}

Mlp Mlp::random(std::span<const std::size_t> dims, std::span<const Activation> activations, Rng& rng) {
  return build(dims, activations, &rng);
}

std::size_t Mlp::input_dim() const {
  return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().weight.cols());
}

std::size_t Mlp::output_dim() const {
  return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.back().weight.rows());
}

Matrix Mlp::forward(const Matrix& x, Tape* tape) const {
  if (static_cast<std::size_t>(x.cols()) != input_dim()) {
    fail(ErrorCode::kShape, fmt::format("network expects width {}, got {}", input_dim(), x.cols()));
  }
  if (tape) {
    tape->inputs.clear();
    tape->outputs.clear();
  }
  Matrix a = x;
  for (const auto& layer : layers_) {
    Matrix z(a.rows(), layer.weight.rows());
    z.noalias() = a * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    apply_activation(z, layer.activation);
    if (tape) {
      tape->inputs.push_back(std::move(a));
      tape->outputs.push_back(z);
    }
    a = std::move(z);
  }
  return a;
}

Matrix Mlp::backward(const Tape& tape, const Matrix& dy, MlpGradient& grad) const {
  const std::size_t n = layers_.size();
  if (tape.inputs.size() != n || tape.outputs.size() != n) fail(ErrorCode::kShape, "tape does not match network depth");
  if (grad.layers.size() != n) fail(ErrorCode::kShape, "gradient does not match network depth");
  if (dy.rows() != tape.outputs.back().rows() || dy.cols() != tape.outputs.back().cols()) {
    fail(ErrorCode::kShape, "upstream gradient shape does not match the recorded output");
  }
  Matrix d = dy;
  for (std::size_t k = n; k-- > 0;) {
    const auto& layer = layers_[k];
    const Matrix& in = tape.inputs[k];
    if (in.cols() != layer.weight.cols() || tape.outputs[k].cols() != layer.weight.rows()) {
      fail(ErrorCode::kShape, fmt::format("stale tape at layer {}", k));
    }
    Matrix dz = activation_backward(tape.outputs[k], d, layer.activation);
    grad.layers[k].weight.noalias() += dz.transpose() * in;
    grad.layers[k].bias += dz.colwise().sum().transpose();
    Matrix dx(dz.rows(), layer.weight.cols());
    dx.noalias() = dz * layer.weight;
    d = std::move(dx);
  }
  return d;
}

MlpGradient Mlp::zero_gradient() const {
  MlpGradient g;
  for (const auto& layer : layers_) {
    g.layers.push_back({Matrix::Zero(layer.weight.rows(), layer.weight.cols()), Vector::Zero(layer.bias.size())});
  }
  return g;
}

ForwardResult mlp_forward(const Mlp& net, std::span<const double> x) {
  Matrix in = Eigen::Map<const Eigen::RowVectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  ForwardResult r;
  Matrix y = net.forward(in, &r.tape);
  r.y.assign(y.data(), y.data() + y.size());
  return r;
}

BackwardResult mlp_backward(const Mlp& net, const Tape& tape, std::span<const double> dy) {
  Matrix d = Eigen::Map<const Eigen::RowVectorXd>(dy.data(), static_cast<Eigen::Index>(dy.size()));
  BackwardResult r;
  r.grads = net.zero_gradient();
  Matrix dx = net.backward(tape, d, r.grads);
  r.dx.assign(dx.data(), dx.data() + dx.size());
  return r;
}

AdamState::AdamState(AdamConfig config) : config_(config) {
  if (!(config_.learning_rate > 0.0) || !(config_.epsilon > 0.0) || config_.beta1 < 0.0 || config_.beta1 >= 1.0 ||
      config_.beta2 < 0.0 || config_.beta2 >= 1.0) {
    fail(ErrorCode::kConfig, "invalid Adam hyperparameters");
  }
}

void AdamState::step(std::span<const ParamBlock> blocks) {
  if (m_.empty()) {
    for (const auto& b : blocks) {
      m_.emplace_back(b.size, 0.0);
      v_.emplace_back(b.size, 0.0);
    }
  }
  if (blocks.size() != m_.size()) fail(ErrorCode::kShape, "Adam received a different number of parameter blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].size != m_[i].size()) fail(ErrorCode::kShape, fmt::format("Adam block {} changed size", i));
    for (std::size_t j = 0; j < blocks[i].size; ++j) {
      if (!std::isfinite(blocks[i].grad[j])) {
        fail(ErrorCode::kNumeric, fmt::format("non-finite gradient in block {} at index {}", i, j));
      }
    }
  }
  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    double* p = blocks[i].param;
    const double* g = blocks[i].grad;
    double* m = m_[i].data();
    double* v = v_[i].data();
    for (std::size_t j = 0; j < blocks[i].size; ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      p[j] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grads) {
  if (params.size() != grads.size()) fail(ErrorCode::kShape, "parameter and gradient lengths differ");
  const ParamBlock block{params.data(), grads.data(), params.size()};
  state.step(std::span<const ParamBlock>(&block, 1));
}

void append_blocks(Mlp& net, const MlpGradient& grad, std::vector<ParamBlock>& out) {
  if (grad.layers.size() != net.num_layers()) fail(ErrorCode::kShape, "gradient does not match network depth");
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    auto& layer = net.layers()[l];
    out.push_back({layer.weight.data(), grad.layers[l].weight.data(), static_cast<std::size_t>(layer.weight.size())});
    out.push_back({layer.bias.data(), grad.layers[l].bias.data(), static_cast<std::size_t>(layer.bias.size())});
  }
}

void GumbelConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    fail(ErrorCode::kConfig, fmt::format("Gumbel temperature must be positive, got {}", temperature));
  }
}

namespace {

double gumbel_noise(Rng& rng) { return -std::log(-std::log(uniform_open01(rng))); }

}  // namespace

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double mx = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (auto& x : p) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

GumbelSample gumbel_st(std::span<const double> logits, const GumbelConfig& cfg, Rng* rng) {
  cfg.validate();
  for (double x : logits) {
    if (!std::isfinite(x)) fail(ErrorCode::kNumeric, "Gumbel logits must be finite");
  }
  const std::size_t k = logits.size();
  if (cfg.noise && cfg.noise->size() != k) fail(ErrorCode::kShape, "injected Gumbel noise has the wrong length");
  std::vector<double> perturbed(k);
  for (std::size_t i = 0; i < k; ++i) {
    double g = 0.0;
    if (cfg.noise) {
      g = (*cfg.noise)[i];
    } else if (rng) {
      g = gumbel_noise(*rng);
    }
    perturbed[i] = (logits[i] + g) / cfg.temperature;
  }
  GumbelSample s;
  s.soft = softmax(perturbed);
  s.hard.assign(k, 0.0);
  if (k > 0) s.hard[argmax(perturbed)] = 1.0;
  return s;
}

std::vector<double> gumbel_st_backward(std::span<const double> soft, std::span<const double> dout, double temperature) {
  if (soft.size() != dout.size()) fail(ErrorCode::kShape, "Gumbel backward lengths differ");
  double dot = 0.0;
  for (std::size_t i = 0; i < soft.size(); ++i) dot += soft[i] * dout[i];
  std::vector<double> d(soft.size());
  for (std::size_t i = 0; i < soft.size(); ++i) d[i] = soft[i] * (dout[i] - dot) / temperature;
  return d;
}

Matrix sample_gumbel(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) g(r, c) = gumbel_noise(rng);
  }
  return g;
}

GumbelBatch gumbel_st(const Matrix& logits, double temperature, const Matrix* noise) {
  GumbelConfig{temperature, std::nullopt}.validate();
  if (noise && (noise->rows() != logits.rows() || noise->cols() != logits.cols())) {
    fail(ErrorCode::kShape, "Gumbel noise shape does not match the logits");
  }
  if (!logits.allFinite()) fail(ErrorCode::kNumeric, "Gumbel logits must be finite");
  GumbelBatch out{Matrix::Zero(logits.rows(), logits.cols()), Matrix(logits.rows(), logits.cols())};
  std::vector<double> perturbed(static_cast<std::size_t>(logits.cols()));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      const double g = noise ? (*noise)(r, c) : 0.0;
      perturbed[static_cast<std::size_t>(c)] = (logits(r, c) + g) / temperature;
    }
    const auto p = softmax(perturbed);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) out.soft(r, c) = p[static_cast<std::size_t>(c)];
    out.hard(r, static_cast<Eigen::Index>(argmax(perturbed))) = 1.0;
  }
  return out;
}

Matrix gumbel_st_backward(const Matrix& soft, const Matrix& dout, double temperature) {
  if (soft.rows() != dout.rows() || soft.cols() != dout.cols()) fail(ErrorCode::kShape, "Gumbel backward shapes differ");
  const Vector dot = (soft.array() * dout.array()).rowwise().sum();
  Matrix d = dout;
  d.colwise() -= dot;
  return (soft.array() * d.array() / temperature).matrix();
}

CrossEntropy softmax_ce(std::span<const double> logits, std::size_t target) {
  if (target >= logits.size()) {
    fail(ErrorCode::kDomain, fmt::format("target class {} outside {} logits", target, logits.size()));
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double x : logits) sum += std::exp(x - mx);
  const double log_z = mx + std::log(sum);
  CrossEntropy ce;
  ce.loss = log_z - logits[target];
  ce.dlogits.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) ce.dlogits[i] = std::exp(logits[i] - log_z);
  ce.dlogits[target] -= 1.0;
  return ce;
}

}  // namespace pecan::nn
