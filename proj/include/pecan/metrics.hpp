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
#include <vector>

#include <Eigen/Dense>

#include "pecan/core.hpp"
#include "pecan/model.hpp"

namespace pecan {

/// Ranks starting at 1, ties share their average rank.
std::vector<double> average_ranks(std::span<const double> v);

/// Both correlations return 0 when either input is constant. kShape on a
/// length mismatch or fewer than 2 entries.
double pearson_rho(std::span<const double> u, std::span<const double> v);
double spearman_rho(std::span<const double> u, std::span<const double> v);

/// Fraction of trajectories explained by the best one-to-one map from latent
/// task ids to true task ids.
double task_accuracy(std::span<const std::size_t> latent_ids, std::span<const std::size_t> true_ids);
/// Same, from one-hot codes.
double task_accuracy(const std::vector<std::vector<double>>& one_hots, std::span<const std::size_t> true_ids);

/// Mean over rows of the per-element squared error.
double trajectory_error(const Eigen::MatrixXd& x, const Eigen::MatrixXd& xhat);

/// Mean latent distance over pairs with identical style and different task.
/// kDegenerate when no such pair exists.
double inconsistency(const Eigen::MatrixXd& z, std::span<const StyleSpec> specs);

/// |Spearman| between pairwise style distances and pairwise latent distances
/// over all unordered pairs. Each style dimension is scaled by its range over
/// the given set so that differently scaled style variables weigh equally.
double monotonicity(const Eigen::MatrixXd& z, std::span<const StyleSpec> specs);

/// Best injective alignment between style and latent dimensions of the mean
/// |Pearson| over aligned pairs.
double disentanglement(const Eigen::MatrixXd& z, std::span<const StyleSpec> specs);

struct EvalReport {
  double task_accuracy = 0.0;
  double trajectory_error = 0.0;
  double inconsistency = 0.0;
  double monotonicity = 0.0;
  double disentanglement = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_eval = 0;

  bool operator==(const EvalReport&) const = default;
};

/// All five metrics of a model on an evaluation set with ground truth.
EvalReport evaluate(const PecanModel& model, const LabeledDataset& eval_set);

std::string eval_report_to_json(const EvalReport& report);
EvalReport eval_report_from_json(std::string_view text);

}  // namespace pecan
