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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pecan {

/// A fixed-length sequence of state-action pairs, stored row-major.
class Trajectory {
 public:
  Trajectory() = default;

  /// `states` holds steps*state_dim values, `actions` steps*action_dim.
  /// Throws kValidation if steps < 2, sizes disagree or any entry is non-finite.
  Trajectory(std::size_t steps, std::size_t state_dim, std::size_t action_dim,
             std::vector<double> states, std::vector<double> actions);

  /// Inverse of flatten(). Throws kShape on a length mismatch.
  static Trajectory unflatten(std::span<const double> flat, std::size_t steps,
                              std::size_t state_dim, std::size_t action_dim);

  std::size_t steps() const noexcept { return steps_; }
  std::size_t state_dim() const noexcept { return state_dim_; }
  std::size_t action_dim() const noexcept { return action_dim_; }
  std::size_t step_width() const noexcept { return state_dim_ + action_dim_; }
  std::size_t flat_size() const noexcept { return steps_ * step_width(); }

  std::span<const double> state(std::size_t t) const;
  std::span<const double> action(std::size_t t) const;
  const std::vector<double>& states() const noexcept { return states_; }
  const std::vector<double>& actions() const noexcept { return actions_; }

  /// [s_1, a_1, s_2, a_2, ...] of length steps * (state_dim + action_dim).
  std::vector<double> flatten() const;

  /// Linear interpolation per dimension onto `steps` evenly spaced samples
  /// spanning the first and last step.
  Trajectory downsample(std::size_t steps) const;

  bool operator==(const Trajectory&) const = default;

 private:
  std::size_t steps_ = 0;
  std::size_t state_dim_ = 0;
  std::size_t action_dim_ = 0;
  std::vector<double> states_;
  std::vector<double> actions_;
};

/// Ground-truth task and style of a generated trajectory. Evaluation only.
struct StyleSpec {
  std::size_t task_id = 0;
  std::vector<double> style;

  bool operator==(const StyleSpec&) const = default;
};

/// A set of trajectories a teacher judged to share one (extreme) style.
struct StyleLabelGroup {
  std::size_t class_index = 0;
  std::vector<std::size_t> member_ids;  // sorted, unique

  /// m-dimensional code with a single 1 at class_index.
  std::vector<double> one_hot(std::size_t num_classes) const;

  bool operator==(const StyleLabelGroup&) const = default;
};

/// Descriptive metadata carried alongside generated datasets.
struct DatasetMeta {
  std::string environment;
  std::vector<std::string> task_names;
  std::vector<std::string> style_names;
  double dt = 0.0;  // seconds per raw step, 0 when not a timed rollout

  bool empty() const { return environment.empty() && task_names.empty() && style_names.empty() && dt == 0.0; }
  bool operator==(const DatasetMeta&) const = default;
};

/// The part of a dataset training is allowed to see: no StyleSpec.
struct TrainingData {
  std::span<const Trajectory> trajectories;
  std::span<const StyleLabelGroup> labels;
  std::size_t num_tasks = 0;
};

class LabeledDataset {
 public:
  LabeledDataset() = default;

  /// Validates every invariant; throws kValidation naming the violation.
  LabeledDataset(std::vector<Trajectory> trajectories, std::optional<std::vector<StyleSpec>> specs,
                 std::vector<StyleLabelGroup> labels, std::size_t num_tasks, DatasetMeta meta = {});

  std::size_t size() const noexcept { return trajectories_.size(); }
  std::size_t num_tasks() const noexcept { return num_tasks_; }
  std::size_t num_classes() const noexcept { return labels_.size(); }
  const std::vector<Trajectory>& trajectories() const noexcept { return trajectories_; }
  const std::optional<std::vector<StyleSpec>>& specs() const noexcept { return specs_; }
  const std::vector<StyleLabelGroup>& labels() const noexcept { return labels_; }
  const DatasetMeta& meta() const noexcept { return meta_; }

  /// Ground truth, throwing kValidation when the dataset carries none.
  const std::vector<StyleSpec>& require_specs() const;

  TrainingData training_view() const { return {trajectories_, labels_, num_tasks_}; }

  /// Same trajectories and specs with a replacement label set.
  LabeledDataset with_labels(std::vector<StyleLabelGroup> labels) const;

  bool operator==(const LabeledDataset&) const = default;

 private:
  std::vector<Trajectory> trajectories_;
  std::optional<std::vector<StyleSpec>> specs_;
  std::vector<StyleLabelGroup> labels_;
  std::size_t num_tasks_ = 0;
  DatasetMeta meta_;
};

/// Per-dimension affine map of flattened trajectories onto [-1, 1].
/// Dimensions that never vary map to 0.
struct Normalization {
  std::vector<double> lower;
  std::vector<double> upper;

  static Normalization fit(std::span<const std::vector<double>> rows);

  std::size_t size() const noexcept { return lower.size(); }
  std::vector<double> apply(std::span<const double> raw) const;
  std::vector<double> invert(std::span<const double> normalized) const;

  bool operator==(const Normalization&) const = default;
};

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  bool operator==(const Tensor&) const = default;
};

struct TrajectoryShape {
  std::size_t steps = 0;  // model-input steps (after downsampling)
  std::size_t state_dim = 0;
  std::size_t action_dim = 0;

  std::size_t flat_size() const { return steps * (state_dim + action_dim); }
  bool operator==(const TrajectoryShape&) const = default;
};

/// Latent position of a labeled group after training, with its ground truth.
struct CornerAnnotation {
  std::size_t class_index = 0;
  std::vector<double> z;
  std::vector<double> style;  // empty when the dataset had no ground truth

  bool operator==(const CornerAnnotation&) const = default;
};

struct CheckpointMeta {
  std::string environment;
  std::vector<std::string> task_names;
  double dt = 0.0;
  std::vector<CornerAnnotation> corners;

  bool operator==(const CheckpointMeta&) const = default;
};

inline constexpr int kFormatVersion = 1;

/// Serializable snapshot of a trained model.
struct Checkpoint {
  int version = kFormatVersion;
  std::size_t d_tau = 0;
  std::size_t d_theta = 0;
  std::size_t num_classes = 0;
  std::size_t hidden_width = 0;
  double temperature = 1.0;
  TrajectoryShape traj_shape;
  Normalization norm;
  std::map<std::string, Tensor> params;
  std::uint64_t seed = 0;
  CheckpointMeta meta;

  /// Throws kValidation when parameter shapes do not chain.
  void validate() const;

  bool operator==(const Checkpoint&) const = default;
};

}  // namespace pecan
