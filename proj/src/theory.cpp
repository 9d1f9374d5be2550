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
#include "pecan/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "json.hpp"
#include "pecan/error.hpp"
#include "pecan/random.hpp"

namespace pecan {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void check_width(const Points& points, std::size_t width, const char* what) {
  for (const auto& p : points) {
    if (p.size() != width) fail(ErrorCode::kDomain, fmt::format("{} have inconsistent widths", what));
  }
}

// Population standard deviation of projections onto the unit direction u.
double projected_std(const Points& cluster, const std::vector<double>& mean, const std::vector<double>& u) {
  double s = 0.0;
  for (const auto& p : cluster) {
    double proj = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) proj += (p[i] - mean[i]) * u[i];
    s += proj * proj;
  }
  return std::sqrt(s / static_cast<double>(cluster.size()));
}

std::size_t nearest(const std::vector<double>& p, const Points& centroids) {
  std::size_t best = 0;
  double best_d = sq_dist(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = sq_dist(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Points kmeanspp(const Points& points, std::size_t k, Rng& rng) {
  Points centroids;
  centroids.push_back(points[uniform_index(rng, points.size())]);
  std::vector<double> d2(points.size());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = sq_dist(points[i], centroids[nearest(points[i], centroids)]);
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = uniform_index(rng, points.size());
    }
    centroids.push_back(points[pick]);
  }
  return centroids;
}

}  // namespace

std::vector<double> mean_point(const Points& points) {
  if (points.empty()) fail(ErrorCode::kDomain, "mean of an empty point set");
  std::vector<double> m(points.front().size(), 0.0);
  for (const auto& p : points) {
    if (p.size() != m.size()) fail(ErrorCode::kDomain, "points have inconsistent widths");
    for (std::size_t i = 0; i < p.size(); ++i) m[i] += p[i];
  }
  for (auto& x : m) x /= static_cast<double>(points.size());
  return m;
}

ProjectionStats line_projection_stats(const Points& cluster_a, const Points& cluster_b) {
  if (cluster_a.size() < 2 || cluster_b.size() < 2) fail(ErrorCode::kDomain, "each cluster needs at least 2 points");
  const auto mu_a = mean_point(cluster_a);
  const auto mu_b = mean_point(cluster_b);
  if (mu_a.size() != mu_b.size()) fail(ErrorCode::kDomain, "clusters have different widths");
  std::vector<double> u(mu_a.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = mu_b[i] - mu_a[i];
  const double dist = std::sqrt(sq_dist(mu_a, mu_b));
  if (dist == 0.0) fail(ErrorCode::kDegenerate, "cluster means coincide; the projection line is undefined");
  for (auto& x : u) x /= dist;
  return {dist, projected_std(cluster_a, mu_a, u), projected_std(cluster_b, mu_b, u)};
}

bool bimodality_criterion(double distance, double sigma_a, double sigma_b, double separation) {
  if (sigma_a < 0.0 || sigma_b < 0.0) fail(ErrorCode::kDomain, "standard deviations must be non-negative");
  return distance > separation * (sigma_a + sigma_b);
}

double cluster_accuracy_bound(const Points& points, std::span<const std::size_t> labels, const Points& means) {
  if (points.size() != labels.size()) fail(ErrorCode::kShape, "points and labels differ in length");
  const std::size_t k = means.size();
  if (k < 2) fail(ErrorCode::kDomain, "the bound needs at least 2 clusters");
  std::vector<double> score(k, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t own = labels[i];
    if (own >= k) fail(ErrorCode::kDomain, fmt::format("label {} has no mean", own));
    const double d_own = sq_dist(points[i], means[own]);
    bool closer_other = false;
    bool tie = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (c == own) continue;
      const double d = sq_dist(points[i], means[c]);
      if (d < d_own) closer_other = true;
      if (d == d_own) tie = true;
    }
    score[own] += closer_other ? 0.0 : (tie ? 0.5 : 1.0);
    ++count[own];
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c] == 0) fail(ErrorCode::kDomain, fmt::format("cluster {} is empty", c));
    total += score[c] / static_cast<double>(count[c]);
  }
  return total / static_cast<double>(k);
}

double kmeans_objective(const Points& points, std::span<const std::size_t> assignments, const Points& centroids) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += sq_dist(points[i], centroids[assignments[i]]);
  return s;
}

KMeansResult kmeans_cluster(const Points& points, std::size_t k, std::uint64_t seed, std::size_t max_iterations,
                            const std::optional<Points>& init) {
  if (k == 0) fail(ErrorCode::kDomain, "k must be positive");
  if (points.size() < k) fail(ErrorCode::kDomain, fmt::format("k = {} exceeds the {} points", k, points.size()));
  const std::size_t width = points.front().size();
  check_width(points, width, "points");
  KMeansResult r;
  if (init) {
    if (init->size() != k) fail(ErrorCode::kDomain, "initial centroid count differs from k");
    check_width(*init, width, "initial centroids");
    r.centroids = *init;
  } else {
    Rng rng = derive_rng(seed, 0);
    r.centroids = kmeanspp(points, k, rng);
  }
  r.assignments.assign(points.size(), 0);
  std::vector<std::size_t> previous;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    for (std::size_t i = 0; i < points.size(); ++i) r.assignments[i] = nearest(points[i], r.centroids);
    r.objective_history.push_back(kmeans_objective(points, r.assignments, r.centroids));
    r.iterations = it + 1;
    if (r.assignments == previous) {
      r.converged = true;
      break;
    }
    previous = r.assignments;

    Points sums(k, std::vector<double>(width, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& s = sums[r.assignments[i]];
      for (std::size_t d = 0; d < width; ++d) s[d] += points[i][d];
      ++counts[r.assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < width; ++d) r.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      // Reseed at the worst-served point; it then costs nothing.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = sq_dist(points[i], r.centroids[r.assignments[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      r.centroids[c] = points[far];
      r.assignments[far] = c;
    }
  }
  return r;
}

ClusterDiagnostics diagnose_clusters(const Points& points, std::span<const std::size_t> labels, double separation) {
  if (points.size() != labels.size()) fail(ErrorCode::kShape, "points and labels differ in length");
  if (points.empty()) fail(ErrorCode::kDomain, "no points to diagnose");
  const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<Points> clusters(k);
  for (std::size_t i = 0; i < points.size(); ++i) clusters[labels[i]].push_back(points[i]);
  ClusterDiagnostics d;
  for (const auto& c : clusters) d.means.push_back(mean_point(c));
  d.separation_ok = true;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      ClusterPair p;
      p.a = a;
      p.b = b;
      p.stats = line_projection_stats(clusters[a], clusters[b]);
      p.separated = bimodality_criterion(p.stats.distance, p.stats.sigma_a, p.stats.sigma_b, separation);
      d.separation_ok = d.separation_ok && p.separated;
      d.pairs.push_back(p);
    }
  }
  d.accuracy_bound = cluster_accuracy_bound(points, labels, d.means);
  return d;
}

ClusterDiagnostics diagnose_dataset(const LabeledDataset& dataset, std::size_t steps, double separation) {
  const auto& specs = dataset.require_specs();
  Points rows;
  rows.reserve(dataset.size());
  for (const auto& t : dataset.trajectories()) rows.push_back(t.downsample(steps).flatten());
  const Normalization norm = Normalization::fit(rows);
  for (auto& r : rows) r = norm.apply(r);
  std::vector<std::size_t> labels;
  for (const auto& s : specs) labels.push_back(s.task_id);
  return diagnose_clusters(rows, labels, separation);
}

std::string diagnostics_to_json(const ClusterDiagnostics& d) {
  nlohmann::json j;
  j["separation_ok"] = d.separation_ok;
  j["accuracy_bound"] = d.accuracy_bound;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : d.pairs) {
    j["pairs"].push_back({{"a", p.a},
                          {"b", p.b},
                          {"distance", p.stats.distance},
                          {"sigma_a", p.stats.sigma_a},
                          {"sigma_b", p.stats.sigma_b},
                          {"separated", p.separated}});
  }
  j["means"] = d.means;
  return j.dump() + "\n";
}

}  // namespace pecan
