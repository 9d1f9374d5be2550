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
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "pecan/random.hpp"
#include "pecan/theory.hpp"
#include "test_support.hpp"

namespace pecan {
namespace {

using testing::error_code_of;

Points gaussian_blob(const std::vector<double>& center, double sigma, std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  Points out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p = center;
    for (auto& x : p) x += normal(rng);
    out.push_back(std::move(p));
  }
  return out;
}

TEST(LineProjection, HandComputedExample) {
  const Points a = {{-1, 0}, {1, 0}};
  const Points b = {{4, 1}, {6, -1}};
  const ProjectionStats s = line_projection_stats(a, b);
  EXPECT_DOUBLE_EQ(s.distance, 5.0);
  EXPECT_DOUBLE_EQ(s.sigma_a, 1.0);
  EXPECT_DOUBLE_EQ(s.sigma_b, 1.0);
  EXPECT_TRUE(bimodality_criterion(s.distance, s.sigma_a, s.sigma_b));
  // The comparison is strict.
  EXPECT_FALSE(bimodality_criterion(s.distance, s.sigma_a, s.sigma_b, 2.5));
}

TEST(LineProjection, OrthogonalSpreadDoesNotCount) {
  const Points a = {{0, -50}, {0, 50}};
  const Points b = {{3, -50}, {3, 50}};
  const ProjectionStats s = line_projection_stats(a, b);
  EXPECT_DOUBLE_EQ(s.sigma_a, 0.0);
  EXPECT_DOUBLE_EQ(s.sigma_b, 0.0);
}

TEST(LineProjection, DegenerateInputs) {
  EXPECT_EQ(error_code_of([] { line_projection_stats({{0, 0}}, {{1, 1}, {2, 2}}); }), ErrorCode::kDomain);
  EXPECT_EQ(error_code_of([] { line_projection_stats({{0, 0}, {2, 2}}, {{1, 1}, {1, 1}}); }), ErrorCode::kDegenerate);
  EXPECT_EQ(error_code_of([] { line_projection_stats({{0, 0}, {2, 2}}, {{1}, {2}}); }), ErrorCode::kDomain);
  EXPECT_EQ(error_code_of([] { bimodality_criterion(1.0, -0.1, 0.0); }), ErrorCode::kDomain);
}

TEST(LineProjection, IsotropicGaussiansRecoverTheirSigma) {
  Rng rng(1);
  const Points a = gaussian_blob({0, 0, 0, 0, 0}, 0.5, 4000, rng);
  const Points b = gaussian_blob({3, -1, 2, 0, 1}, 0.5, 4000, rng);
  const ProjectionStats s = line_projection_stats(a, b);
  EXPECT_NEAR(s.sigma_a, 0.5, 0.025);
  EXPECT_NEAR(s.sigma_b, 0.5, 0.025);
  EXPECT_NEAR(s.distance, std::sqrt(15.0), 0.05);
}

TEST(AccuracyBound, TiesScoreHalf) {
  const Points means = {{0.0}, {2.0}};
  const std::vector<std::size_t> labels = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(cluster_accuracy_bound({{1.0}, {0.0}, {2.0}, {2.0}}, labels, means), 0.875);
  EXPECT_DOUBLE_EQ(cluster_accuracy_bound({{-1.0}, {0.0}, {2.0}, {3.0}}, labels, means), 1.0);
  EXPECT_DOUBLE_EQ(cluster_accuracy_bound({{1.5}, {1.5}, {0.5}, {0.5}}, labels, means), 0.0);
}

TEST(AccuracyBound, SingletonsAtTheirMeansScoreOne) {
  const Points means = {{0.0, 1.0}, {3.0, -2.0}, {5.0, 5.0}};
  EXPECT_DOUBLE_EQ(cluster_accuracy_bound(means, std::vector<std::size_t>{0, 1, 2}, means), 1.0);
}

// Means 0 and 4 with unit variance split at 2, so each cluster keeps Phi(2).
TEST(AccuracyBound, OneDimensionalGaussiansMatchTheNormalMass) {
  Rng rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  Points pts;
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < 2; ++c) {
    for (int i = 0; i < 10000; ++i) {
      pts.push_back({4.0 * static_cast<double>(c) + normal(rng)});
      labels.push_back(c);
    }
  }
  const double phi2 = 0.5 * std::erfc(-2.0 / std::sqrt(2.0));
  EXPECT_NEAR(cluster_accuracy_bound(pts, labels, {{0.0}, {4.0}}), phi2, 0.01);
}

TEST(AccuracyBound, EqualsNearestMeanCountingOnGaussians) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    Points pts = gaussian_blob({0, 0}, 1.0, 50, rng);
    const Points b = gaussian_blob({1.0, 0.5}, 1.0, 30, rng);
    pts.insert(pts.end(), b.begin(), b.end());
    std::vector<std::size_t> labels(80, 0);
    std::fill(labels.begin() + 50, labels.end(), 1);
    const Points means = {{0, 0}, {1.0, 0.5}};
    double hits[2] = {0, 0};
    for (std::size_t i = 0; i < 80; ++i) {
      const auto d = [&](const std::vector<double>& m) { return std::hypot(pts[i][0] - m[0], pts[i][1] - m[1]); };
      hits[labels[i]] += d(means[labels[i]]) < d(means[1 - labels[i]]);
    }
    EXPECT_NEAR(cluster_accuracy_bound(pts, labels, means), 0.5 * (hits[0] / 50 + hits[1] / 30), 1e-12);
  }
}

TEST(KMeans, SingleClusterIsTheMean) {
  Rng rng(3);
  const Points pts = gaussian_blob({1, 2, 3}, 1.0, 100, rng);
  const KMeansResult r = kmeans_cluster(pts, 1, 0);
  ASSERT_TRUE(r.converged);
  const auto m = mean_point(pts);
  for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(r.centroids[0][d], m[d], 1e-12);
}

TEST(KMeans, FarApartBlobsAreRecoveredExactly) {
  Rng rng(4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Points pts = gaussian_blob({0, 0}, 1.0, 60, rng);
    const Points b = gaussian_blob({20, 0}, 1.0, 60, rng);
    pts.insert(pts.end(), b.begin(), b.end());
    const KMeansResult r = kmeans_cluster(pts, 2, seed);
    EXPECT_TRUE(r.converged);
    for (std::size_t i = 1; i < 60; ++i) EXPECT_EQ(r.assignments[i], r.assignments[0]);
    for (std::size_t i = 61; i < 120; ++i) EXPECT_EQ(r.assignments[i], r.assignments[60]);
    EXPECT_NE(r.assignments[0], r.assignments[60]);
  }
}

TEST(KMeans, ObjectiveNeverIncreases) {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Points pts = gaussian_blob({0, 0, 0}, 1.0, 200, rng);
    const KMeansResult r = kmeans_cluster(pts, 5, seed);
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      EXPECT_LE(r.objective_history[i], r.objective_history[i - 1] + 1e-9);
    }
    EXPECT_NEAR(r.objective_history.back(), kmeans_objective(pts, r.assignments, r.centroids), 1e-9);
  }
}

TEST(KMeans, StartingAtTheTrueMeansOnlyImproves) {
  Rng rng(6);
  Points pts = gaussian_blob({0, 0}, 1.0, 100, rng);
  const Points b = gaussian_blob({2, 2}, 1.0, 100, rng);
  pts.insert(pts.end(), b.begin(), b.end());
  const Points truth = {{0, 0}, {2, 2}};
  std::vector<std::size_t> labels(200, 0);
  std::fill(labels.begin() + 100, labels.end(), 1);
  const KMeansResult r = kmeans_cluster(pts, 2, 0, 300, truth);
  EXPECT_LE(kmeans_objective(pts, r.assignments, r.centroids), kmeans_objective(pts, labels, truth));
}

TEST(KMeans, EmptyClustersAreReseeded) {
  const Points pts = {{0}, {0.1}, {5}, {5.1}, {10}};
  const Points init = {{0}, {5}, {1000}};
  const KMeansResult r = kmeans_cluster(pts, 3, 0, 300, init);
  std::set<std::size_t> used(r.assignments.begin(), r.assignments.end());
  EXPECT_EQ(used.size(), 3u);
  EXPECT_EQ(error_code_of([&] { kmeans_cluster(pts, 6, 0); }), ErrorCode::kDomain);
  EXPECT_EQ(error_code_of([&] { kmeans_cluster(pts, 0, 0); }), ErrorCode::kDomain);
}

TEST(KMeans, SeededRunsAreReproducible) {
  Rng rng(7);
  const Points pts = gaussian_blob({0, 0}, 1.0, 100, rng);
  EXPECT_EQ(kmeans_cluster(pts, 4, 9).assignments, kmeans_cluster(pts, 4, 9).assignments);
}

TEST(Diagnostics, SeparatedClustersPassEveryPair) {
  Rng rng(8);
  Points pts;
  std::vector<std::size_t> labels;
  const Points centers = {{0, 0}, {10, 0}, {0, 10}};
  for (std::size_t c = 0; c < 3; ++c) {
    for (auto& p : gaussian_blob(centers[c], 0.5, 40, rng)) {
      pts.push_back(p);
      labels.push_back(c);
    }
  }
  const ClusterDiagnostics d = diagnose_clusters(pts, labels);
  EXPECT_EQ(d.pairs.size(), 3u);
  EXPECT_TRUE(d.separation_ok);
  EXPECT_EQ(d.accuracy_bound, 1.0);
  const auto j = nlohmann::json::parse(diagnostics_to_json(d));
  EXPECT_EQ(j.at("pairs").size(), 3u);
  EXPECT_TRUE(j.at("separation_ok").get<bool>());
}

TEST(Diagnostics, DrivingTasksAreDistinctClusters) {
  const ClusterDiagnostics d = diagnose_dataset(testing::driving_eval());
  ASSERT_EQ(d.pairs.size(), 1u);
  EXPECT_EQ(d.means.size(), 2u);
  EXPECT_GT(d.pairs[0].stats.distance, 0.0);
  EXPECT_GE(d.accuracy_bound, 0.5);
  EXPECT_EQ(error_code_of([] { diagnose_dataset(LabeledDataset(testing::driving_eval().trajectories(), std::nullopt, {}, 2)); }),
            ErrorCode::kValidation);
}

}  // namespace
}  // namespace pecan
