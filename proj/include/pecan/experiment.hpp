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

// Seeded multi-run experiments over the synthetic environments, with
// per-seed records, aggregates and the ordinal comparisons each study makes.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pecan/envgen.hpp"
#include "pecan/metrics.hpp"
#include "pecan/model.hpp"

namespace pecan {

inline constexpr std::array<const char*, 5> kMetricNames = {"task_accuracy", "trajectory_error", "inconsistency",
                                                            "monotonicity", "disentanglement"};

/// Metric values of one run; a metric that is undefined on the evaluation set
/// (kDegenerate) is left empty.
using MetricValues = std::array<std::optional<double>, kMetricNames.size()>;

/// One training configuration, run once per seed.
struct Condition {
  std::string name;
  DatasetSpec train;
  DatasetSpec eval;
  ModelConfig model;
  TrainConfig train_cfg;  // the seed is replaced per run
};

struct ExperimentPlan {
  std::string name;  // ablation_driving, dimensionality, demo_sweep or high_dims
  std::vector<Condition> conditions;
  std::size_t n_seeds = 20;
  std::filesystem::path output;  // per-seed CSV; empty to skip

  void validate() const;
};

/// Knobs shared by the standard plans.
struct PlanOptions {
  std::size_t n_seeds = 20;
  std::size_t epochs = 5000;
  std::uint64_t dataset_seed = 0;
  std::vector<std::size_t> sizes = {16, 32, 48, 64};  // demo_sweep
  std::vector<std::size_t> dims = {4, 5, 6};          // high_dims
};

/// The study named `name` with its conditions; kConfig for unknown names.
ExperimentPlan standard_plan(std::string_view name, const PlanOptions& options = {});

/// {"name": ..., "n_seeds": ..., "epochs": ..., "dataset_seed": ..., "sizes": [...],
///  "dims": [...], "output": "..."}; absent fields keep the defaults.
ExperimentPlan plan_from_json(std::string_view text);

/// Latent placement of the labeled groups of a training set.
struct LabelGeometry {
  std::vector<std::vector<double>> means;  // per group, in class order
  double max_spread = 0.0;                 // largest member distance to its group mean
  std::size_t distinct_orthants = 0;       // sign patterns among the means (0 counts as +)
  bool opposite_signs_1d = false;          // d_theta == 1 and two means of opposite sign
};

LabelGeometry label_geometry(const PecanModel& model, const LabeledDataset& dataset);

struct RunRecord {
  std::string condition;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;  // why the run failed
  MetricValues metrics{};
  LabelGeometry labels;
  LossTerms final_loss;

  bool operator==(const RunRecord&) const;
};

/// Evaluates each metric on its own so one degenerate metric does not hide
/// the others.
MetricValues evaluate_metrics(const PecanModel& model, const LabeledDataset& eval_set);

/// Memoizes runs by their complete configuration. Thread safe. With a
/// directory, records also persist across processes as one JSON file each.
class RunCache {
 public:
  RunCache() = default;
  explicit RunCache(std::filesystem::path directory);

  std::optional<RunRecord> find(const std::string& key) const;
  void store(const std::string& key, const RunRecord& record);

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
  mutable std::map<std::string, RunRecord> memo_;
};

/// Canonical text of everything that determines a run's outcome.
std::string run_key(const Condition& condition, std::uint64_t seed);

/// Trains and evaluates one condition at one seed. Training failures are
/// captured in the record, not thrown.
RunRecord run_condition(const Condition& condition, std::uint64_t seed);

struct MetricSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n); 0 for n == 1
};

struct ConditionSummary {
  std::string condition;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::map<std::string, MetricSummary> metrics;  // metrics with at least one value
};

struct OrdinalFlag {
  std::string name;  // short identifier, e.g. "monotonicity:pecan>intermediate_labels"
  bool holds = false;
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<RunRecord> runs;  // condition-major, seed order
  std::vector<ConditionSummary> summaries;
  std::vector<OrdinalFlag> flags;
  std::vector<std::string> warnings;

  const ConditionSummary* find(std::string_view condition) const;
};

using ProgressFn = std::function<void(const RunRecord&, std::size_t done, std::size_t total)>;

/// Runs every condition for seeds 0..n_seeds-1, aggregates, evaluates the
/// plan's ordinal comparisons and writes the CSV when the plan names one.
ExperimentReport run_experiment(const ExperimentPlan& plan, RunCache* cache = nullptr,
                                const ProgressFn& progress = {});

/// Aggregates in condition order of first appearance, then seed order.
ExperimentReport summarize(std::string_view experiment, std::vector<RunRecord> runs);

/// Columns: experiment, condition, seed, the five metrics, status.
std::string runs_csv(const ExperimentReport& report);
/// Columns: experiment, condition, metric, n, mean, se.
std::string summary_csv(const ExperimentReport& report);
/// Aligned text table followed by the ordinal flags and warnings.
std::string summary_table(const ExperimentReport& report);

}  // namespace pecan
