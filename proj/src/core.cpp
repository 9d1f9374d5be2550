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
#include "pecan/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "pecan/error.hpp"

namespace pecan {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kVersion: return "version";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kSpec: return "spec";
    case ErrorCode::kDegenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Trajectory::Trajectory(std::size_t steps, std::size_t state_dim, std::size_t action_dim,
                       std::vector<double> states, std::vector<double> actions)
    : steps_(steps),
      state_dim_(state_dim),
      action_dim_(action_dim),
      states_(std::move(states)),
      actions_(std::move(actions)) {
  if (steps_ < 2) fail(ErrorCode::kValidation, fmt::format("trajectory needs at least 2 steps, got {}", steps_));
  if (state_dim_ == 0) fail(ErrorCode::kValidation, "trajectory state_dim must be positive");
  if (states_.size() != steps_ * state_dim_ || actions_.size() != steps_ * action_dim_) {
    fail(ErrorCode::kValidation,
         fmt::format("trajectory storage mismatch: {} states / {} actions for T={} dims=({}, {})", states_.size(),
                     actions_.size(), steps_, state_dim_, action_dim_));
  }
  if (!all_finite(states_) || !all_finite(actions_)) fail(ErrorCode::kValidation, "trajectory contains non-finite values");
}

Trajectory Trajectory::unflatten(std::span<const double> flat, std::size_t steps, std::size_t state_dim,
                                 std::size_t action_dim) {
  const std::size_t width = state_dim + action_dim;
  if (flat.size() != steps * width) {
    fail(ErrorCode::kShape, fmt::format("cannot unflatten {} values into T={} x {}", flat.size(), steps, width));
  }
  std::vector<double> states;
  std::vector<double> actions;
  states.reserve(steps * state_dim);
  actions.reserve(steps * action_dim);
  for (std::size_t t = 0; t < steps; ++t) {
    const double* row = flat.data() + t * width;
    states.insert(states.end(), row, row + state_dim);
    actions.insert(actions.end(), row + state_dim, row + width);
  }
  return Trajectory(steps, state_dim, action_dim, std::move(states), std::move(actions));
}

std::span<const double> Trajectory::state(std::size_t t) const {
  return std::span<const double>(states_).subspan(t * state_dim_, state_dim_);
}

std::span<const double> Trajectory::action(std::size_t t) const {
  return std::span<const double>(actions_).subspan(t * action_dim_, action_dim_);
}

std::vector<double> Trajectory::flatten() const {
  std::vector<double> flat;
  flat.reserve(flat_size());
  for (std::size_t t = 0; t < steps_; ++t) {
    auto s = state(t);
    auto a = action(t);
    flat.insert(flat.end(), s.begin(), s.end());
    flat.insert(flat.end(), a.begin(), a.end());
  }
  return flat;
}

Trajectory Trajectory::downsample(std::size_t steps) const {
  if (steps < 2) fail(ErrorCode::kShape, "downsample target must have at least 2 steps");
  if (steps == steps_) return *this;
  auto resample = [&](const std::vector<double>& src, std::size_t dim) {
    std::vector<double> out(steps * dim);
    for (std::size_t k = 0; k < steps; ++k) {
      const double pos = static_cast<double>(k) * static_cast<double>(steps_ - 1) / static_cast<double>(steps - 1);
      std::size_t lo = static_cast<std::size_t>(std::floor(pos));
      if (lo >= steps_ - 1) lo = steps_ - 2;
      const double w = pos - static_cast<double>(lo);
      for (std::size_t d = 0; d < dim; ++d) {
        const double a = src[lo * dim + d];
        const double b = src[(lo + 1) * dim + d];
        out[k * dim + d] = w == 0.0 ? a : a + w * (b - a);
      }
    }
    return out;
  };
  return Trajectory(steps, state_dim_, action_dim_, resample(states_, state_dim_), resample(actions_, action_dim_));
}

std::vector<double> StyleLabelGroup::one_hot(std::size_t num_classes) const {
  if (class_index >= num_classes) {
    fail(ErrorCode::kDomain, fmt::format("class index {} outside {} classes", class_index, num_classes));
  }
  std::vector<double> code(num_classes, 0.0);
  code[class_index] = 1.0;
  return code;
}

LabeledDataset::LabeledDataset(std::vector<Trajectory> trajectories, std::optional<std::vector<StyleSpec>> specs,
                               std::vector<StyleLabelGroup> labels, std::size_t num_tasks, DatasetMeta meta)
    : trajectories_(std::move(trajectories)),
      specs_(std::move(specs)),
      labels_(std::move(labels)),
      num_tasks_(num_tasks),
      meta_(std::move(meta)) {
  const std::size_t n = trajectories_.size();
  if (num_tasks_ == 0) fail(ErrorCode::kValidation, "num_tasks must be positive");
  if (n == 0) fail(ErrorCode::kValidation, "dataset has no trajectories");
  for (std::size_t i = 1; i < n; ++i) {
    if (trajectories_[i].state_dim() != trajectories_[0].state_dim() ||
        trajectories_[i].action_dim() != trajectories_[0].action_dim()) {
      fail(ErrorCode::kValidation, fmt::format("trajectories[{}] dimensions differ from trajectories[0]", i));
    }
  }
  if (specs_) {
    if (specs_->size() != n) {
      fail(ErrorCode::kValidation, fmt::format("specs has {} entries for {} trajectories", specs_->size(), n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = (*specs_)[i];
      if (s.task_id >= num_tasks_) {
        fail(ErrorCode::kValidation, fmt::format("specs[{}].task_id {} >= num_tasks {}", i, s.task_id, num_tasks_));
      }
      if (!all_finite(s.style)) fail(ErrorCode::kValidation, fmt::format("specs[{}].style is not finite", i));
      if (s.style.size() != (*specs_)[0].style.size()) {
        fail(ErrorCode::kValidation, fmt::format("specs[{}].style length differs from specs[0]", i));
      }
    }
  }
  const std::size_t m = labels_.size();
  std::vector<bool> class_seen(m, false);
  std::set<std::size_t> members_seen;
  for (std::size_t g = 0; g < m; ++g) {
    auto& group = labels_[g];
    if (group.class_index >= m || class_seen[group.class_index]) {
      fail(ErrorCode::kValidation, fmt::format("labels[{}].class_index {} is out of range or repeated", g, group.class_index));
    }
    class_seen[group.class_index] = true;
    if (group.member_ids.empty()) fail(ErrorCode::kValidation, fmt::format("labels[{}] has no members", g));
    std::sort(group.member_ids.begin(), group.member_ids.end());
    if (std::adjacent_find(group.member_ids.begin(), group.member_ids.end()) != group.member_ids.end()) {
      fail(ErrorCode::kValidation, fmt::format("labels[{}] lists a member twice", g));
    }
    std::set<std::size_t> tasks_in_group;
    for (std::size_t id : group.member_ids) {
      if (id >= n) fail(ErrorCode::kValidation, fmt::format("labels[{}] member {} >= N={}", g, id, n));
      if (!members_seen.insert(id).second) {
        fail(ErrorCode::kValidation, fmt::format("trajectory {} appears in more than one label group", id));
      }
      if (specs_ && !tasks_in_group.insert((*specs_)[id].task_id).second) {
        fail(ErrorCode::kValidation, fmt::format("labels[{}] has two members from task {}", g, (*specs_)[id].task_id));
      }
    }
  }
}

const std::vector<StyleSpec>& LabeledDataset::require_specs() const {
  if (!specs_) fail(ErrorCode::kValidation, "dataset carries no ground-truth specs");
  return *specs_;
}

LabeledDataset LabeledDataset::with_labels(std::vector<StyleLabelGroup> labels) const {
  return LabeledDataset(trajectories_, specs_, std::move(labels), num_tasks_, meta_);
}

Normalization Normalization::fit(std::span<const std::vector<double>> rows) {
  if (rows.empty()) fail(ErrorCode::kValidation, "cannot fit normalization on zero rows");
  Normalization norm;
  norm.lower = rows.front();
  norm.upper = rows.front();
  for (const auto& row : rows) {
    if (row.size() != norm.lower.size()) fail(ErrorCode::kShape, "normalization rows differ in length");
    for (std::size_t d = 0; d < row.size(); ++d) {
      norm.lower[d] = std::min(norm.lower[d], row[d]);
      norm.upper[d] = std::max(norm.upper[d], row[d]);
    }
  }
  return norm;
}

std::vector<double> Normalization::apply(std::span<const double> raw) const {
  if (raw.size() != size()) {
    fail(ErrorCode::kShape, fmt::format("normalization expects {} values, got {}", size(), raw.size()));
  }
  std::vector<double> out(raw.size());
  for (std::size_t d = 0; d < raw.size(); ++d) {
    const double range = upper[d] - lower[d];
    out[d] = range > 0.0 ? 2.0 * (raw[d] - lower[d]) / range - 1.0 : 0.0;
  }
  return out;
}

std::vector<double> Normalization::invert(std::span<const double> normalized) const {
  if (normalized.size() != size()) {
    fail(ErrorCode::kShape, fmt::format("normalization expects {} values, got {}", size(), normalized.size()));
  }
  std::vector<double> out(normalized.size());
  for (std::size_t d = 0; d < normalized.size(); ++d) {
    const double range = upper[d] - lower[d];
    out[d] = range > 0.0 ? lower[d] + 0.5 * (normalized[d] + 1.0) * range : lower[d];
  }
  return out;
}

void Checkpoint::validate() const {
  auto expect = [&](const std::string& name, std::vector<std::size_t> shape) {
    auto it = params.find(name);
    if (it == params.end()) fail(ErrorCode::kValidation, fmt::format("checkpoint is missing parameter '{}'", name));
    if (it->second.shape != shape) {
      fail(ErrorCode::kValidation, fmt::format("parameter '{}' has shape [{}], expected [{}]", name,
                                               fmt::join(it->second.shape, ","), fmt::join(shape, ",")));
    }
    std::size_t count = 1;
    for (auto s : shape) count *= s;
    if (it->second.data.size() != count) {
      fail(ErrorCode::kValidation, fmt::format("parameter '{}' holds {} values for shape [{}]", name,
                                               it->second.data.size(), fmt::join(shape, ",")));
    }
  };
  if (version != kFormatVersion) fail(ErrorCode::kVersion, fmt::format("unsupported checkpoint version {}", version));
  if (d_tau == 0 || d_theta == 0 || hidden_width == 0) fail(ErrorCode::kValidation, "checkpoint dims must be positive");
  if (!(temperature > 0.0)) fail(ErrorCode::kValidation, "checkpoint temperature must be positive");
  const std::size_t io = traj_shape.flat_size();
  if (io == 0) fail(ErrorCode::kValidation, "checkpoint trajectory shape is empty");
  if (norm.lower.size() != io || norm.upper.size() != io) {
    fail(ErrorCode::kValidation, "normalization length does not match trajectory shape");
  }
  const std::size_t h = hidden_width;
  auto mlp = [&](const std::string& prefix, std::size_t in, std::size_t out) {
    const std::size_t dims[] = {in, h, h, h, out};
    for (std::size_t l = 0; l < 4; ++l) {
      expect(fmt::format("{}.{}.weight", prefix, l), {dims[l + 1], dims[l]});
      expect(fmt::format("{}.{}.bias", prefix, l), {dims[l + 1]});
    }
  };
  mlp("task_encoder", io, d_tau);
  mlp("style_encoder", io, d_theta);
  mlp("decoder", d_tau + d_theta, io);
  std::size_t expected = 24;
  if (num_classes > 0) {
    expect("classifier.weight", {num_classes, d_theta});
    expect("classifier.bias", {num_classes});
    expected += 2;
  }
  if (params.size() != expected) {
    fail(ErrorCode::kValidation, fmt::format("checkpoint has {} parameters, expected {}", params.size(), expected));
  }
}

}  // namespace pecan
