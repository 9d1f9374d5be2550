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
#include "pecan/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "pecan/error.hpp"
#include "pecan/io.hpp"
#include "pecan/json_util.hpp"

namespace pecan {

namespace {

using nlohmann::json;

constexpr std::size_t kAcc = 0;
constexpr std::size_t kErr = 1;
constexpr std::size_t kInc = 2;
constexpr std::size_t kMono = 3;

DatasetSpec eval_of(DatasetSpec spec) {
  spec.split = Split::kEval;
  spec.label_mode = LabelMode::kNone;
  return spec;
}

Condition make_condition(std::string name, DatasetSpec train, std::size_t d_theta, AblationMode mode,
                         const PlanOptions& o) {
  Condition c;
  c.name = std::move(name);
  c.train = train;
  c.eval = eval_of(train);
  c.model.d_theta = d_theta;
  c.train_cfg.epochs = o.epochs;
  c.train_cfg.ablation_mode = mode;
  return c;
}

DatasetSpec driving_spec(const PlanOptions& o) {
  DatasetSpec s;
  s.seed = o.dataset_seed;
  return s;
}

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json record_to_json(const RunRecord& r) {
  json metrics = json::object();
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
    metrics[kMetricNames[k]] = r.metrics[k] ? json(*r.metrics[k]) : json(nullptr);
  }
  return {{"condition", r.condition},
          {"seed", r.seed},
          {"ok", r.ok},
          {"error", r.error},
          {"metrics", metrics},
          {"labels",
           {{"means", r.labels.means},
            {"max_spread", r.labels.max_spread},
            {"distinct_orthants", r.labels.distinct_orthants},
            {"opposite_signs_1d", r.labels.opposite_signs_1d}}},
          {"final_loss",
           {{"trajectory", r.final_loss.trajectory},
            {"cross_entropy", r.final_loss.cross_entropy},
            {"total", r.final_loss.total}}}};
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.condition = j.at("condition").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ok = j.at("ok").get<bool>();
  r.error = j.at("error").get<std::string>();
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) r.metrics[k] = optional_from(j.at("metrics").at(kMetricNames[k]));
  const auto& l = j.at("labels");
  r.labels.means = l.at("means").get<std::vector<std::vector<double>>>();
  r.labels.max_spread = l.at("max_spread").get<double>();
  r.labels.distinct_orthants = l.at("distinct_orthants").get<std::size_t>();
  r.labels.opposite_signs_1d = l.at("opposite_signs_1d").get<bool>();
  const auto& f = j.at("final_loss");
  r.final_loss = {f.at("trajectory").get<double>(), f.at("cross_entropy").get<double>(), f.at("total").get<double>()};
  return r;
}

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::optional<double> mean_of(const ExperimentReport& r, std::string_view condition, const char* metric) {
  const auto* s = r.find(condition);
  if (s == nullptr) return std::nullopt;
  auto it = s->metrics.find(metric);
  if (it == s->metrics.end()) return std::nullopt;
  return it->second.mean;
}

std::string show(std::optional<double> v) { return v ? fmt::format("{:.4f}", *v) : std::string("n/a"); }

void compare(ExperimentReport& r, const char* metric, std::string_view a, std::string_view op, std::string_view b) {
  const auto va = mean_of(r, a, metric);
  const auto vb = mean_of(r, b, metric);
  bool holds = false;
  if (va && vb) holds = op == ">" ? *va > *vb : *va < *vb;
  r.flags.push_back({fmt::format("{}:{}{}{}", metric, a, op, b), holds,
                     fmt::format("{} {} vs {} {}", a, show(va), b, show(vb))});
}

void at_least(ExperimentReport& r, const char* metric, std::string_view condition, double threshold) {
  const auto v = mean_of(r, condition, metric);
  r.flags.push_back({fmt::format("{}:{}>={}", metric, condition, threshold), v && *v >= threshold,
                     fmt::format("{} {}", condition, show(v))});
}

std::vector<std::string> condition_order(const std::vector<RunRecord>& runs) {
  std::vector<std::string> order;
  for (const auto& r : runs) {
    if (std::find(order.begin(), order.end(), r.condition) == order.end()) order.push_back(r.condition);
  }
  return order;
}

void add_corner_flag(ExperimentReport& r, std::string_view condition) {
  std::size_t total = 0;
  std::size_t good = 0;
  for (const auto& run : r.runs) {
    if (run.condition != condition) continue;
    ++total;
    if (run.ok && run.labels.means.size() == 4 && run.labels.distinct_orthants == 4 && run.labels.max_spread <= 0.1) {
      ++good;
    }
  }
  // At least 90% of the seeds, i.e. 18 of 20.
  const bool holds = total > 0 && 10 * good >= 9 * total;
  r.flags.push_back({fmt::format("corners:{}:distinct_quadrants", condition), holds,
                     fmt::format("{}/{} seeds with four distinct quadrants and spread <= 0.1", good, total)});
}

void add_flags(ExperimentReport& r) {
  const auto& e = r.experiment;
  if (e == "ablation_driving") {
    add_corner_flag(r, "pecan");
    compare(r, "task_accuracy", "pecan", ">", "no_labels");
    at_least(r, "task_accuracy", "pecan", 0.9);
    compare(r, "inconsistency", "pecan", "<", "no_labels");
    compare(r, "monotonicity", "pecan", ">", "intermediate_labels");
    at_least(r, "monotonicity", "pecan", 0.8);
  } else if (e == "dimensionality") {
    compare(r, "task_accuracy", "Extra", "<", "Exact");
    compare(r, "inconsistency", "Extra", ">", "Exact");
    compare(r, "monotonicity", "Fewer", "<", "Exact");
    const auto f = mean_of(r, "Fewer", "task_accuracy");
    const auto x = mean_of(r, "Exact", "task_accuracy");
    r.flags.push_back({"task_accuracy:|Fewer-Exact|<=0.05", f && x && std::abs(*f - *x) <= 0.05,
                       fmt::format("Fewer {} vs Exact {}", show(f), show(x))});
  } else if (e == "demo_sweep") {
    const auto order = condition_order(r.runs);
    bool non_increasing = !order.empty();
    std::string detail;
    std::optional<double> prev;
    double inc_lo = INFINITY, inc_hi = -INFINITY, mono_lo = INFINITY, mono_hi = -INFINITY;
    bool complete = !order.empty();
    for (const auto& c : order) {
      const auto err = mean_of(r, c, "trajectory_error");
      const auto inc = mean_of(r, c, "inconsistency");
      const auto mono = mean_of(r, c, "monotonicity");
      if (!err || !inc || !mono) {
        complete = false;
        continue;
      }
      if (prev && *err > *prev) non_increasing = false;
      prev = err;
      detail += fmt::format("{}{} {:.5f}", detail.empty() ? "" : ", ", c, *err);
      inc_lo = std::min(inc_lo, *inc);
      inc_hi = std::max(inc_hi, *inc);
      mono_lo = std::min(mono_lo, *mono);
      mono_hi = std::max(mono_hi, *mono);
    }
    r.flags.push_back({"trajectory_error:non_increasing", complete && non_increasing, detail});
    r.flags.push_back({"inconsistency:range<0.1", complete && inc_hi - inc_lo < 0.1,
                       fmt::format("range {:.4f}", inc_hi - inc_lo)});
    r.flags.push_back({"monotonicity:range<0.1", complete && mono_hi - mono_lo < 0.1,
                       fmt::format("range {:.4f}", mono_hi - mono_lo)});
  } else if (e == "high_dims") {
    const auto order = condition_order(r.runs);
    if (!order.empty()) {
      const auto lo = mean_of(r, order.front(), "monotonicity");
      const auto hi = mean_of(r, order.back(), "monotonicity");
      r.flags.push_back({fmt::format("monotonicity:|{}-{}|<=0.15", order.back(), order.front()),
                         lo && hi && std::abs(*hi - *lo) <= 0.15,
                         fmt::format("{} {} vs {} {}", order.front(), show(lo), order.back(), show(hi))});
    }
    bool all = !order.empty();
    std::string detail;
    for (const auto& c : order) {
      const auto a = mean_of(r, c, "task_accuracy");
      all = all && a && *a >= 0.9;
      detail += fmt::format("{}{} {}", detail.empty() ? "" : ", ", c, show(a));
    }
    r.flags.push_back({"task_accuracy:all>=0.9", all, detail});
  }
}

std::string csv_value(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

}  // namespace

void ExperimentPlan::validate() const {
  if (n_seeds == 0) fail(ErrorCode::kConfig, "n_seeds must be at least 1");
  if (conditions.empty()) fail(ErrorCode::kConfig, "an experiment needs at least one condition");
  std::set<std::string> names;
  for (const auto& c : conditions) {
    if (!names.insert(c.name).second) fail(ErrorCode::kConfig, fmt::format("duplicate condition '{}'", c.name));
    c.train.validate();
    c.eval.validate();
    c.model.validate();
    c.train_cfg.validate();
  }
}

ExperimentPlan standard_plan(std::string_view name, const PlanOptions& o) {
  ExperimentPlan p;
  p.name = std::string(name);
  p.n_seeds = o.n_seeds;
  const DatasetSpec base = driving_spec(o);
  if (name == "ablation_driving") {
    DatasetSpec x = base;
    x.label_mode = LabelMode::kIntermediates;
    p.conditions.push_back(make_condition("pecan", base, 2, AblationMode::kPecan, o));
    p.conditions.push_back(make_condition("no_labels", base, 2, AblationMode::kNoLabels, o));
    p.conditions.push_back(make_condition("intermediate_labels", x, 2, AblationMode::kIntermediateLabels, o));
  } else if (name == "dimensionality") {
    p.conditions.push_back(make_condition("Fewer", base, 1, AblationMode::kPecan, o));
    p.conditions.push_back(make_condition("Exact", base, 2, AblationMode::kPecan, o));
    p.conditions.push_back(make_condition("Extra", base, 3, AblationMode::kPecan, o));
  } else if (name == "demo_sweep") {
    sweep_datasets(base, o.sizes);  // rejects unusable sizes before any training
    for (std::size_t n : o.sizes) {
      DatasetSpec s = base;
      s.num_demos = n;
      p.conditions.push_back(make_condition(fmt::format("N={}", n), s, 2, AblationMode::kPecan, o));
    }
  } else if (name == "high_dims") {
    for (std::size_t d : o.dims) {
      DatasetSpec s;
      s.environment = Environment::kPolynomial;
      s.style_dims = d;
      s.num_demos = 0;
      s.seed = o.dataset_seed;
      p.conditions.push_back(make_condition(fmt::format("d={}", d), s, d, AblationMode::kPecan, o));
    }
  } else {
    fail(ErrorCode::kConfig, fmt::format("unknown experiment '{}' (expected ablation_driving, dimensionality, "
                                         "demo_sweep or high_dims)",
                                         name));
  }
  p.validate();
  return p;
}

ExperimentPlan plan_from_json(std::string_view text) {
  using namespace jsonutil;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, fmt::format("plan is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) parse_error("plan", "expected an object");
  static const std::set<std::string> known = {"name", "n_seeds", "epochs", "dataset_seed", "sizes", "dims", "output"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) parse_error(key, "unknown plan field");
  }
  PlanOptions o;
  o.n_seeds = get_or<std::size_t>(j, "n_seeds", o.n_seeds, "n_seeds");
  o.epochs = get_or<std::size_t>(j, "epochs", o.epochs, "epochs");
  o.dataset_seed = get_or<std::uint64_t>(j, "dataset_seed", o.dataset_seed, "dataset_seed");
  if (j.contains("sizes")) o.sizes = get<std::vector<std::size_t>>(j, "sizes", "sizes");
  if (j.contains("dims")) o.dims = get<std::vector<std::size_t>>(j, "dims", "dims");
  ExperimentPlan p = standard_plan(get<std::string>(j, "name", "name"), o);
  p.output = get_or<std::string>(j, "output", "", "output");
  return p;
}

LabelGeometry label_geometry(const PecanModel& model, const LabeledDataset& dataset) {
  LabelGeometry g;
  if (dataset.labels().empty()) return g;
  const auto enc = model.encode_all(dataset.trajectories());
  const auto d = static_cast<Eigen::Index>(model.d_theta());
  std::set<std::vector<bool>> orthants;
  for (const auto& group : dataset.labels()) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (auto i : group.member_ids) mean += enc.style.row(static_cast<Eigen::Index>(i)).transpose();
    mean /= static_cast<double>(group.member_ids.size());
    for (auto i : group.member_ids) {
      const double dist = (enc.style.row(static_cast<Eigen::Index>(i)).transpose() - mean).norm();
      g.max_spread = std::max(g.max_spread, dist);
    }
    std::vector<bool> sign(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) sign[static_cast<std::size_t>(k)] = mean(k) >= 0.0;
    orthants.insert(sign);
    g.means.emplace_back(mean.data(), mean.data() + d);
  }
  g.distinct_orthants = orthants.size();
  g.opposite_signs_1d = d == 1 && g.means.size() == 2 && g.means[0][0] * g.means[1][0] < 0.0;
  return g;
}

bool RunRecord::operator==(const RunRecord& o) const {
  return record_to_json(*this) == record_to_json(o);
}

MetricValues evaluate_metrics(const PecanModel& model, const LabeledDataset& eval_set) {
  const auto& specs = eval_set.require_specs();
  if (eval_set.size() == 0) fail(ErrorCode::kDegenerate, "evaluation set is empty");
  const Eigen::MatrixXd x = model.model_inputs(eval_set.trajectories());
  const auto enc = model.encode_all(eval_set.trajectories());
  Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(x.rows(), static_cast<Eigen::Index>(model.d_tau() + model.d_theta()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) codes(r, static_cast<Eigen::Index>(enc.task[static_cast<std::size_t>(r)])) = 1.0;
  codes.rightCols(static_cast<Eigen::Index>(model.d_theta())) = enc.style;
  const Eigen::MatrixXd xhat = model.decode_normalized(codes);
  std::vector<std::size_t> true_ids;
  for (const auto& s : specs) true_ids.push_back(s.task_id);

  MetricValues m;
  const auto attempt = [&](std::size_t k, auto&& fn) {
    try {
      m[k] = fn();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerate) throw;
      spdlog::warn("{} undefined: {}", kMetricNames[k], e.what());
    }
  };
  attempt(kAcc, [&] { return task_accuracy(enc.task, true_ids); });
  attempt(kErr, [&] { return trajectory_error(x, xhat); });
  attempt(kInc, [&] { return inconsistency(enc.style, specs); });
  attempt(kMono, [&] { return monotonicity(enc.style, specs); });
  attempt(4, [&] { return disentanglement(enc.style, specs); });
  return m;
}

RunCache::RunCache(std::filesystem::path directory) : dir_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorCode::kIo, fmt::format("cannot create cache directory {}: {}", dir_.string(), ec.message()));
}

std::optional<RunRecord> RunCache::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  if (dir_.empty()) return std::nullopt;
  const auto path = dir_ / fmt::format("{:016x}.json", fnv1a(key));
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const json j = json::parse(read_text_file(path));
    if (j.at("key").get<std::string>() != key) return std::nullopt;  // hash collision
    RunRecord r = record_from_json(j.at("record"));
    memo_.emplace(key, r);
    return r;
  } catch (const std::exception& e) {
    spdlog::warn("ignoring unreadable cache entry {}: {}", path.string(), e.what());
    return std::nullopt;
  }
}

void RunCache::store(const std::string& key, const RunRecord& record) {
  std::lock_guard lock(mu_);
  memo_[key] = record;
  if (dir_.empty()) return;
  const json j = {{"key", key}, {"record", record_to_json(record)}};
  write_text_file_atomic(dir_ / fmt::format("{:016x}.json", fnv1a(key)), j.dump() + "\n");
}

// Bump when a change to training or evaluation alters results for an
// unchanged configuration, so stale cache entries stop matching.
constexpr int kCacheFormat = 1;

std::string run_key(const Condition& c, std::uint64_t seed) {
  const json j = {{"train", json::parse(dataset_spec_to_json(c.train))},
                  {"eval", json::parse(dataset_spec_to_json(c.eval))},
                  {"model",
                   {{"d_theta", c.model.d_theta},
                    {"hidden_width", c.model.hidden_width},
                    {"downsample_steps", c.model.downsample_steps},
                    {"temperature", c.model.temperature}}},
                  {"train_cfg",
                   {{"epochs", c.train_cfg.epochs},
                    {"learning_rate", c.train_cfg.learning_rate},
                    {"lambda_traj", c.train_cfg.lambda_traj},
                    {"lambda_ce", c.train_cfg.lambda_ce},
                    {"ablation_mode", to_string(c.train_cfg.ablation_mode)}}},
                  {"seed", seed},
                  {"cache_format", kCacheFormat}};
  return j.dump();
}

RunRecord run_condition(const Condition& c, std::uint64_t seed) {
  RunRecord r;
  r.condition = c.name;
  r.seed = seed;
  try {
    const LabeledDataset train = build_dataset(c.train);
    const LabeledDataset eval = build_dataset(c.eval);
    TrainConfig cfg = c.train_cfg;
    cfg.seed = seed;
    TrainResult t = train_on(train, c.model, cfg);
    if (!t.history.empty()) r.final_loss = t.history.back();
    r.metrics = evaluate_metrics(t.model, eval);
    r.labels = label_geometry(t.model, train);
    r.ok = true;
  } catch (const Error& e) {
    // A numeric blow-up fails this seed only; configuration errors are fatal.
    if (e.code() != ErrorCode::kNumeric) throw;
    r.ok = false;
    r.error = e.what();
    spdlog::warn("condition {} seed {} failed: {}", c.name, seed, e.what());
  }
  return r;
}

const ConditionSummary* ExperimentReport::find(std::string_view condition) const {
  for (const auto& s : summaries) {
    if (s.condition == condition) return &s;
  }
  return nullptr;
}

ExperimentReport run_experiment(const ExperimentPlan& plan, RunCache* cache, const ProgressFn& progress) {
  plan.validate();
  std::vector<RunRecord> runs;
  const std::size_t total = plan.conditions.size() * plan.n_seeds;
  for (const auto& c : plan.conditions) {
    for (std::uint64_t seed = 0; seed < plan.n_seeds; ++seed) {
      const std::string key = run_key(c, seed);
      std::optional<RunRecord> hit = cache ? cache->find(key) : std::nullopt;
      RunRecord r = hit ? *hit : run_condition(c, seed);
      r.condition = c.name;  // a cached run may come from an identically configured condition elsewhere
      if (cache && !hit) cache->store(key, r);
      runs.push_back(std::move(r));
      if (progress) progress(runs.back(), runs.size(), total);
    }
  }
  ExperimentReport report = summarize(plan.name, std::move(runs));
  if (!plan.output.empty()) {
    if (plan.output.has_parent_path()) std::filesystem::create_directories(plan.output.parent_path());
    write_text_file_atomic(plan.output, runs_csv(report));
  }
  return report;
}

ExperimentReport summarize(std::string_view experiment, std::vector<RunRecord> runs) {
  ExperimentReport r;
  r.experiment = std::string(experiment);
  r.runs = std::move(runs);
  for (const auto& name : condition_order(r.runs)) {
    ConditionSummary s;
    s.condition = name;
    std::array<std::vector<double>, kMetricNames.size()> values;
    for (const auto& run : r.runs) {
      if (run.condition != name) continue;
      if (!run.ok) {
        ++s.failed;
        continue;
      }
      ++s.completed;
      for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
        if (run.metrics[k]) values[k].push_back(*run.metrics[k]);
      }
    }
    if (s.failed > 0) {
      r.warnings.push_back(fmt::format("{}: {} of {} seeds failed; aggregates cover the {} completed", name, s.failed,
                                       s.failed + s.completed, s.completed));
    }
    for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
      const auto& v = values[k];
      if (v.empty()) {
        r.warnings.push_back(fmt::format("{}: no values for {}; column omitted", name, kMetricNames[k]));
        continue;
      }
      MetricSummary m;
      m.n = v.size();
      double sum = 0.0;
      for (double x : v) sum += x;
      m.mean = sum / static_cast<double>(m.n);
      if (m.n > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.se = std::sqrt(ss / static_cast<double>(m.n - 1)) / std::sqrt(static_cast<double>(m.n));
      }
      s.metrics[kMetricNames[k]] = m;
    }
    r.summaries.push_back(std::move(s));
  }
  for (const auto& w : r.warnings) spdlog::warn("{}", w);
  add_flags(r);
  return r;
}

std::string runs_csv(const ExperimentReport& report) {
  std::string out = "experiment,condition,seed";
  for (const char* m : kMetricNames) out += fmt::format(",{}", m);
  out += ",status\n";
  for (const auto& run : report.runs) {
    out += fmt::format("{},{},{}", report.experiment, run.condition, run.seed);
    for (const auto& v : run.metrics) out += "," + csv_value(run.ok ? v : std::nullopt);
    out += run.ok ? ",ok\n" : ",failed\n";
  }
  return out;
}

std::string summary_csv(const ExperimentReport& report) {
  std::string out = "experiment,condition,metric,n,mean,se\n";
  for (const auto& s : report.summaries) {
    for (const char* name : kMetricNames) {
      auto it = s.metrics.find(name);
      if (it == s.metrics.end()) continue;
      out += fmt::format("{},{},{},{},{},{}\n", report.experiment, s.condition, name, it->second.n, it->second.mean,
                         it->second.se);
    }
  }
  return out;
}

std::string summary_table(const ExperimentReport& report) {
  // Only metrics with values somewhere get a column.
  std::vector<const char*> columns;
  for (const char* name : kMetricNames) {
    for (const auto& s : report.summaries) {
      if (s.metrics.contains(name)) {
        columns.push_back(name);
        break;
      }
    }
  }
  std::string out = fmt::format("{}\n{:<22}{:>4}", report.experiment, "condition", "n");
  for (const char* c : columns) out += fmt::format("{:>26}", c);
  out += "\n";
  for (const auto& s : report.summaries) {
    out += fmt::format("{:<22}{:>4}", s.condition, s.completed);
    for (const char* c : columns) {
      auto it = s.metrics.find(c);
      out += it == s.metrics.end() ? fmt::format("{:>26}", "-")
                                   : fmt::format("{:>26}", fmt::format("{:.4f} +- {:.4f}", it->second.mean, it->second.se));
    }
    out += "\n";
  }
  for (const auto& f : report.flags) out += fmt::format("[{}] {} ({})\n", f.holds ? "yes" : "no ", f.name, f.detail);
  for (const auto& w : report.warnings) out += fmt::format("warning: {}\n", w);
  return out;
}

}  // namespace pecan
