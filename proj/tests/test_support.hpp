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

// Shared datasets and trained models for the unit suites. Training runs are
// expensive, so each is done once per process and handed out by reference.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "pecan/envgen.hpp"
#include "pecan/error.hpp"
#include "pecan/io.hpp"
#include "pecan/model.hpp"

namespace pecan::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(PECAN_FIXTURES) / name; }

inline DatasetSpec eval_spec_for(DatasetSpec spec) {
  spec.split = Split::kEval;
  spec.label_mode = LabelMode::kNone;
  return spec;
}

inline DatasetSpec driving_1d_spec() {
  DatasetSpec s;
  s.style_dims = 1;
  return s;
}

inline const LabeledDataset& driving_train() {
  static const LabeledDataset d = build_dataset(DatasetSpec{});
  return d;
}

inline const LabeledDataset& driving_eval() {
  static const LabeledDataset d = build_dataset(eval_spec_for(DatasetSpec{}));
  return d;
}

inline const LabeledDataset& driving_1d_train() {
  static const LabeledDataset d = build_dataset(driving_1d_spec());
  return d;
}

/// Run settings of the calibrated reference configuration (see README).
inline RunConfig reference_config() { return run_config_from_json(read_text_file(fixture("reference_run.json"))); }

/// Trains, or loads the result of an identical earlier training from the
/// build tree; ctest runs every test in its own process.
inline TrainResult cached_training(const LabeledDataset& data, const RunConfig& cfg) {
  const std::string key = run_config_to_json(cfg) + dataset_to_json(data);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) h = (h ^ c) * 1099511628211ull;
  const auto path = std::filesystem::path(PECAN_TEST_CACHE) / (std::to_string(h) + ".json");
  if (std::filesystem::exists(path)) {
    const auto j = nlohmann::json::parse(read_text_file(path));
    if (j.at("key").get<std::string>() == key) {
      TrainResult r{PecanModel::from_checkpoint(checkpoint_from_json(j.at("checkpoint").get<std::string>())), {}};
      for (const auto& l : j.at("history")) r.history.push_back({l[0].get<double>(), l[1].get<double>(), l[2].get<double>()});
      return r;
    }
  }
  TrainResult r = train_on(data, cfg.model, cfg.train);
  nlohmann::json history = nlohmann::json::array();
  for (const auto& l : r.history) history.push_back({l.trajectory, l.cross_entropy, l.total});
  std::filesystem::create_directories(path.parent_path());
  write_text_file_atomic(path, nlohmann::json{{"key", key},
                                              {"checkpoint", checkpoint_to_json(r.model.to_checkpoint())},
                                              {"history", history}}
                                   .dump());
  return r;
}

/// The calibrated reference configuration on the 16-demo 2D driving set.
inline const TrainResult& reference_run_2d() {
  static const TrainResult r = cached_training(driving_train(), reference_config());
  return r;
}

/// The same configuration on the 1D (speed only) driving set.
inline const TrainResult& reference_run_1d() {
  static const TrainResult r = [] {
    RunConfig c = reference_config();
    c.model.d_theta = 1;
    return cached_training(driving_1d_train(), c);
  }();
  return r;
}

/// Ours-L under the reference configuration.
inline const TrainResult& reference_run_no_labels() {
  static const TrainResult r = [] {
    RunConfig c = reference_config();
    c.train.ablation_mode = AblationMode::kNoLabels;
    return cached_training(driving_train(), c);
  }();
  return r;
}

/// Library defaults, seed 0.
inline const TrainResult& default_run_2d() {
  static const TrainResult r = cached_training(driving_train(), RunConfig{});
  return r;
}

/// The code of the pecan::Error thrown by f, or nothing when f returns.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace pecan::testing
