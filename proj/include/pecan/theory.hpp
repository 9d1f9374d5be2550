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

// Separability diagnostics for task clusters: projections onto the line
// between cluster means, a bimodality test, k-means, and an accuracy bound.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pecan/core.hpp"

namespace pecan {

using Points = std::vector<std::vector<double>>;

std::vector<double> mean_point(const Points& points);

struct ProjectionStats {
  double distance = 0.0;  // |mu_b - mu_a|
  double sigma_a = 0.0;   // population std of projections about mu_a
  double sigma_b = 0.0;
};

/// kDomain if a cluster has fewer than 2 points or widths differ,
/// kDegenerate if the means coincide.
ProjectionStats line_projection_stats(const Points& cluster_a, const Points& cluster_b);

/// dist > separation * (sigma_a + sigma_b), strictly.
bool bimodality_criterion(double distance, double sigma_a, double sigma_b, double separation = 2.0);

/// Mean over clusters of the mean per-point score: 1 when the nearest true
/// mean is the point's own, 0.5 on an exact tie with it, 0 otherwise.
double cluster_accuracy_bound(const Points& points, std::span<const std::size_t> labels, const Points& means);

struct KMeansResult {
  std::vector<std::size_t> assignments;
  Points centroids;
  std::vector<double> objective_history;  // after every assignment step
  std::size_t iterations = 0;
  bool converged = false;
};

/// Lloyd iterations from k-means++ seeding (or from `init` when given).
/// An empty cluster is reseeded at the point farthest from its centroid.
KMeansResult kmeans_cluster(const Points& points, std::size_t k, std::uint64_t seed, std::size_t max_iterations = 300,
                            const std::optional<Points>& init = std::nullopt);

/// Sum of squared distances from each point to its assigned centroid.
double kmeans_objective(const Points& points, std::span<const std::size_t> assignments, const Points& centroids);

struct ClusterPair {
  std::size_t a = 0;
  std::size_t b = 0;
  ProjectionStats stats;
  bool separated = false;
};

struct ClusterDiagnostics {
  Points means;
  std::vector<ClusterPair> pairs;
  bool separation_ok = false;  // every pair passes the bimodality criterion
  double accuracy_bound = 0.0;
};

ClusterDiagnostics diagnose_clusters(const Points& points, std::span<const std::size_t> labels, double separation = 2.0);

/// Task clusters of a dataset in model-input space (downsampled, flattened,
/// normalized over the dataset itself). Requires ground-truth specs.
ClusterDiagnostics diagnose_dataset(const LabeledDataset& dataset, std::size_t steps = 20, double separation = 2.0);

std::string diagnostics_to_json(const ClusterDiagnostics& diagnostics);

}  // namespace pecan
