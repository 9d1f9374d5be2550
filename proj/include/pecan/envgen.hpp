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

// Synthetic environments with ground-truth styles, and the dataset builders
// used for training and evaluation.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "pecan/core.hpp"

namespace pecan {

inline constexpr double kFeetToMeters = 0.3048;
inline constexpr double kKmhToMs = 1.0 / 3.6;

enum class DrivingTask : std::size_t { kHighway = 0, kIntersection = 1 };

struct DrivingStyle {
  double v_max_kmh = 70.0;  // [40, 100]
  double d_min_ft = 20.0;   // [10, 30]
};

/// Point-mass longitudinal controller and scene layout. Distances in meters,
/// speeds in m/s, time in seconds. Both tasks share one stop point: the lead
/// car on the highway halts there behind queued traffic, and the crossing
/// road of the intersection passes through it.
struct DrivingConfig {
  double dt = 0.4;
  double accel = 4.0;           // comfortable acceleration
  double decel = 6.0;           // planning deceleration for stopping distances
  double ego_start_speed = 0.0;
  double sensor_range = 300.0;  // obstacles farther than this are ignored
  double stop_x = 240.0;
  double lead_start_gap = 200.0;
  double lead_speed = 10.0 * kKmhToMs;
  double cross_start_y = -170.0;
  double cross_speed = 5.0;
};

/// One rollout. State [x_ego, y_ego, x_other, y_other], action [dx, dy] of the
/// ego car, with s_{t+1} = s_t + a_t. Style values are clamped to the
/// generator range and recorded exactly.
std::pair<Trajectory, StyleSpec> simulate_driving(DrivingTask task, DrivingStyle style, std::size_t steps = 100,
                                                  const DrivingConfig& cfg = {});

struct PolySpec {
  double b = 1.0;               // +1 or -1, selects the task
  std::vector<double> coeffs;   // a_0 .. a_n
  double x_lo = -1.0;
  double x_hi = 1.0;
};

/// States (x_t, y_t) with y = b * sum_i a_i x^i over `steps` evenly spaced x;
/// actions are consecutive state deltas (the last repeats the previous one).
std::pair<Trajectory, StyleSpec> gen_polynomial(const PolySpec& spec, std::size_t steps = 100);

enum class Environment { kDriving, kPolynomial };
enum class LabelMode { kExtremes, kIntermediates, kNone };
enum class Split { kTrain, kEval };

const char* to_string(Environment env);
const char* to_string(LabelMode mode);
const char* to_string(Split split);
Environment environment_from_string(std::string_view name);
LabelMode label_mode_from_string(std::string_view name);
Split split_from_string(std::string_view name);

struct DatasetSpec {
  Environment environment = Environment::kDriving;
  Split split = Split::kTrain;
  std::size_t num_demos = 16;   // training size; 0 selects floor(3^d / 2) for polynomial
  std::size_t style_dims = 2;   // driving: 1 (speed only) or 2; polynomial: coefficient count
  LabelMode label_mode = LabelMode::kExtremes;
  std::uint64_t seed = 0;
  std::size_t steps = 100;
  DrivingConfig driving;
  std::vector<double> poly_grid = {0.2, 0.6, 1.0};  // low, middle, high coefficient values
  double poly_x_lo = -1.0;
  double poly_x_hi = 1.0;

  void validate() const;
};

/// Parses a JSON spec document; absent fields keep their defaults.
DatasetSpec dataset_spec_from_json(std::string_view text);
std::string dataset_spec_to_json(const DatasetSpec& spec);

/// Training set (split=kTrain) or the full evaluation grid (split=kEval).
/// Training ids: extremes first, group g holding ids {2g, 2g+1} (one per
/// task), then random intermediates alternating between tasks. Throws kSpec
/// on impossible counts.
LabeledDataset build_dataset(const DatasetSpec& spec);

/// Nested training sets sharing the same extremes. Throws kSpec if a size is
/// below the labeled count or above what the grid can supply.
std::vector<LabeledDataset> sweep_datasets(const DatasetSpec& base, const std::vector<std::size_t>& sizes);

/// Style grid of the environment: every evaluation style, task independent.
std::vector<std::vector<double>> style_grid(const DatasetSpec& spec);

/// Realized style read back from a driving trajectory.
struct DrivingSummary {
  double max_speed_kmh = 0.0;
  double min_gap_ft = 0.0;
};

/// Max ego speed from action magnitudes and min Euclidean distance between
/// the cars. Requires the 4/2 driving layout (kShape otherwise).
DrivingSummary summarize_driving(const Trajectory& trajectory, double dt);

}  // namespace pecan
