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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pecan/core.hpp"
#include "pecan/nn.hpp"

namespace pecan {

enum class AblationMode { kPecan, kNoLabels, kIntermediateLabels };

const char* to_string(AblationMode mode);
/// Accepts "pecan", "no_labels", "intermediate_labels"; kConfig otherwise.
AblationMode ablation_mode_from_string(std::string_view name);

struct ModelConfig {
  std::size_t d_theta = 2;
  std::size_t hidden_width = 128;
  std::size_t downsample_steps = 20;
  double temperature = 1.0;

  void validate() const;
};

struct TrainConfig {
  std::size_t epochs = 5000;
  double learning_rate = 0.0008;
  double lambda_traj = 1.0;
  double lambda_ce = 1.0;
  std::uint64_t seed = 0;
  AblationMode ablation_mode = AblationMode::kPecan;

  void validate() const;
};

/// Model and training settings of one run, as read from a config file:
/// {"d_theta", "hidden_width", "downsample_steps", "temperature", "epochs",
///  "learning_rate", "lambda_traj", "lambda_ce", "seed", "ablation_mode"}.
/// Absent fields keep their defaults; unknown fields are a kParse error.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
};

RunConfig run_config_from_json(std::string_view text);
std::string run_config_to_json(const RunConfig& config);

struct LossTerms {
  double trajectory = 0.0;
  double cross_entropy = 0.0;
  double total = 0.0;
};

/// Task encoder, style encoder, decoder and (optional) style classifier.
/// Every network input is a downsampled, flattened, normalized trajectory.
class PecanModel {
 public:
  PecanModel() = default;

  /// Fresh random weights. The normalization is fitted to `data`, d_tau is the
  /// data's task count and the classifier has `num_classes` outputs (0: none).
  static PecanModel initialize(const TrainingData& data, const ModelConfig& cfg, std::size_t num_classes,
                               std::uint64_t seed);

  static PecanModel from_checkpoint(const Checkpoint& checkpoint);
  Checkpoint to_checkpoint() const;

  std::size_t d_tau() const { return d_tau_; }
  std::size_t d_theta() const { return d_theta_; }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t hidden_width() const { return hidden_width_; }
  double temperature() const { return temperature_; }
  std::uint64_t seed() const { return seed_; }
  const TrajectoryShape& shape() const { return shape_; }
  const Normalization& normalization() const { return norm_; }
  CheckpointMeta& meta() { return meta_; }
  const CheckpointMeta& meta() const { return meta_; }

  nn::Mlp& task_encoder() { return task_encoder_; }
  nn::Mlp& style_encoder() { return style_encoder_; }
  nn::Mlp& decoder() { return decoder_; }
  nn::Mlp& classifier() { return classifier_; }
  const nn::Mlp& task_encoder() const { return task_encoder_; }
  const nn::Mlp& style_encoder() const { return style_encoder_; }
  const nn::Mlp& decoder() const { return decoder_; }
  const nn::Mlp& classifier() const { return classifier_; }

  /// Downsampled, flattened, normalized network input. kShape when the
  /// state or action width differs from the model's.
  std::vector<double> model_input(const Trajectory& trajectory) const;
  nn::Matrix model_inputs(std::span<const Trajectory> trajectories) const;

  /// Deterministic: pure argmax of the task logits, ties to the lowest index.
  std::vector<double> encode_task(const Trajectory& trajectory) const;
  std::vector<double> encode_style(const Trajectory& trajectory) const;

  struct Encoding {
    std::vector<std::size_t> task;  // argmax index per trajectory
    nn::Matrix style;               // one row per trajectory
  };
  Encoding encode_all(std::span<const Trajectory> trajectories) const;

  /// z_tau must be one-hot of length d_tau (kShape / kDomain) and every z_theta
  /// component must lie in [-1, 1] (kDomain). Returns T_ds steps in raw units.
  Trajectory decode(std::span<const double> z_tau, std::span<const double> z_theta) const;

  /// Normalized decoder output for batched codes (rows of [z_tau | z_theta]).
  nn::Matrix decode_normalized(const nn::Matrix& codes) const;

 private:
  std::size_t d_tau_ = 0;
  std::size_t d_theta_ = 0;
  std::size_t num_classes_ = 0;
  std::size_t hidden_width_ = 0;
  double temperature_ = 1.0;
  std::uint64_t seed_ = 0;
  TrajectoryShape shape_;
  Normalization norm_;
  CheckpointMeta meta_;
  nn::Mlp task_encoder_;
  nn::Mlp style_encoder_;
  nn::Mlp decoder_;
  nn::Mlp classifier_;
};

/// Losses on the deterministic path (argmax task codes). The cross-entropy is
/// zero when there are no labels, the model has no classifier or the mode is
/// kNoLabels.
LossTerms compute_losses(const PecanModel& model, const TrainingData& data, const TrainConfig& cfg = {});

/// Network inputs and classifier targets, prepared once per training run.
struct TrainingBatch {
  nn::Matrix x;
  std::vector<Eigen::Index> labeled_rows;
  std::vector<std::size_t> labeled_targets;
  bool with_labels = false;
};

TrainingBatch prepare_batch(const PecanModel& model, const TrainingData& data, const TrainConfig& cfg);

struct ModelGradients {
  nn::MlpGradient task_encoder;
  nn::MlpGradient style_encoder;
  nn::MlpGradient decoder;
  nn::MlpGradient classifier;  // empty when the batch carries no labels
};

ModelGradients zero_gradients(const PecanModel& model, const TrainingBatch& batch);

/// One full-batch pass of the training objective. `gumbel_noise` (N x d_tau)
/// perturbs the task logits, nullptr meaning none. Gradients are added into
/// `grads` when given; the task encoder receives the straight-through estimate.
LossTerms forward_backward(const PecanModel& model, const TrainingBatch& batch, const TrainConfig& cfg,
                           const nn::Matrix* gumbel_noise, ModelGradients* grads);

struct TrainResult {
  PecanModel model;
  std::vector<LossTerms> history;  // one entry per epoch, measured before its update
};

/// Full-batch Adam on the summed loss. Bit-reproducible for a fixed seed.
/// Throws kNumeric naming the epoch and loss components if a loss turns NaN.
TrainResult train(PecanModel model, const TrainingData& data, const TrainConfig& cfg);

/// Initializes, trains and annotates corners in one call.
TrainResult train_on(const LabeledDataset& dataset, const ModelConfig& model_cfg, const TrainConfig& cfg);

/// Records each label group's mean latent style (and ground-truth style when
/// available) plus environment metadata into the model.
void annotate_corners(PecanModel& model, const LabeledDataset& dataset);

}  // namespace pecan
