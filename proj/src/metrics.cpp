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
#include "pecan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "json.hpp"
#include "pecan/assignment.hpp"
#include "pecan/error.hpp"
#include "pecan/json_util.hpp"

namespace pecan {

namespace {

void check_pair(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) fail(ErrorCode::kShape, fmt::format("correlation inputs differ in length ({} vs {})", u.size(), v.size()));
  if (u.size() < 2) fail(ErrorCode::kShape, "correlation needs at least 2 entries");
}

double pearson_unchecked(std::span<const double> u, std::span<const double> v) {
  const double n = static_cast<double>(u.size());
  const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
  const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double suv = 0.0;
  double suu = 0.0;
  double svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i] - mu;
    const double b = v[i] - mv;
    suv += a * b;
    suu += a * a;
    svv += b * b;
  }
  if (suu == 0.0 || svv == 0.0) return 0.0;
  return std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

void check_specs(const Eigen::MatrixXd& z, std::span<const StyleSpec> specs) {
  if (static_cast<std::size_t>(z.rows()) != specs.size()) {
    fail(ErrorCode::kShape, fmt::format("{} latent rows for {} style specs", z.rows(), specs.size()));
  }
  for (const auto& s : specs) {
    if (s.style.size() != specs.front().style.size()) fail(ErrorCode::kShape, "style vectors differ in length");
  }
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson_rho(std::span<const double> u, std::span<const double> v) {
  check_pair(u, v);
  if (constant(u) || constant(v)) return 0.0;
  return pearson_unchecked(u, v);
}

double spearman_rho(std::span<const double> u, std::span<const double> v) {
  check_pair(u, v);
  if (constant(u) || constant(v)) return 0.0;
  const auto ru = average_ranks(u);
  const auto rv = average_ranks(v);
  return pearson_unchecked(ru, rv);
}

double task_accuracy(std::span<const std::size_t> latent_ids, std::span<const std::size_t> true_ids) {
  if (latent_ids.size() != true_ids.size()) fail(ErrorCode::kShape, "predicted and true task lists differ in length");
  if (latent_ids.empty()) fail(ErrorCode::kDegenerate, "task accuracy of an empty set is undefined");
  const std::size_t rows = *std::max_element(latent_ids.begin(), latent_ids.end()) + 1;
  const std::size_t cols = *std::max_element(true_ids.begin(), true_ids.end()) + 1;
  std::vector<std::vector<double>> confusion(rows, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < latent_ids.size(); ++i) confusion[latent_ids[i]][true_ids[i]] += 1.0;
  return max_weight_assignment(confusion).total / static_cast<double>(latent_ids.size());
}

double task_accuracy(const std::vector<std::vector<double>>& one_hots, std::span<const std::size_t> true_ids) {
  std::vector<std::size_t> ids;
  ids.reserve(one_hots.size());
  for (const auto& h : one_hots) {
    std::size_t ones = 0;
    std::size_t at = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (h[k] == 1.0) {
        ++ones;
        at = k;
      } else if (h[k] != 0.0) {
        ones = 2;
      }
    }
    if (ones != 1) fail(ErrorCode::kDomain, "task codes must be one-hot");
    ids.push_back(at);
  }
  return task_accuracy(ids, true_ids);
}

double trajectory_error(const Eigen::MatrixXd& x, const Eigen::MatrixXd& xhat) {
  if (x.rows() != xhat.rows() || x.cols() != xhat.cols()) fail(ErrorCode::kShape, "reconstruction shape mismatch");
  if (x.rows() == 0 || x.cols() == 0) fail(ErrorCode::kDegenerate, "trajectory error of an empty set is undefined");
  return (x - xhat).rowwise().squaredNorm().mean() / static_cast<double>(x.cols());
}

double inconsistency(const Eigen::MatrixXd& z, std::span<const StyleSpec> specs) {
  check_specs(z, specs);
  std::map<std::vector<double>, std::vector<std::size_t>> by_style;
  for (std::size_t i = 0; i < specs.size(); ++i) by_style[specs[i].style].push_back(i);
  double sum = 0.0;
  std::size_t pairs = 0;
  for (const auto& [style, ids] : by_style) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        if (specs[ids[a]].task_id == specs[ids[b]].task_id) continue;
        sum += (z.row(static_cast<Eigen::Index>(ids[a])) - z.row(static_cast<Eigen::Index>(ids[b]))).norm();
        ++pairs;
      }
    }
  }
  if (pairs == 0) fail(ErrorCode::kDegenerate, "no cross-task pairs with identical styles to measure inconsistency");
  return sum / static_cast<double>(pairs);
}

double monotonicity(const Eigen::MatrixXd& z, std::span<const StyleSpec> specs) {
  check_specs(z, specs);
  const std::size_t n = specs.size();
  if (n < 3) fail(ErrorCode::kDegenerate, "monotonicity needs at least 3 trajectories");
  const std::size_t d = specs.front().style.size();
  std::vector<double> scale(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    double lo = specs.front().style[k];
    double hi = lo;
    for (const auto& s : specs) {
      lo = std::min(lo, s.style[k]);
      hi = std::max(hi, s.style[k]);
    }
    scale[k] = hi > lo ? 1.0 / (hi - lo) : 0.0;
  }
  std::vector<double> dstyle;
  std::vector<double> dlatent;
  dstyle.reserve(n * (n - 1) / 2);
  dlatent.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = (specs[i].style[k] - specs[j].style[k]) * scale[k];
        s2 += diff * diff;
      }
      dstyle.push_back(std::sqrt(s2));
      dlatent.push_back((z.row(static_cast<Eigen::Index>(i)) - z.row(static_cast<Eigen::Index>(j))).norm());
    }
  }
  return std::abs(spearman_rho(dstyle, dlatent));
}

double disentanglement(const Eigen::MatrixXd& z, std::span<const StyleSpec> specs) {
  check_specs(z, specs);
  if (specs.size() < 2) fail(ErrorCode::kDegenerate, "disentanglement needs at least 2 trajectories");
  const std::size_t ds = specs.front().style.size();
  const auto dl = static_cast<std::size_t>(z.cols());
  if (ds == 0 || dl == 0) fail(ErrorCode::kDegenerate, "disentanglement needs style and latent dimensions");
  std::vector<std::vector<double>> corr(ds, std::vector<double>(dl, 0.0));
  std::vector<double> style_col(specs.size());
  std::vector<double> latent_col(specs.size());
  for (std::size_t s = 0; s < ds; ++s) {
    for (std::size_t i = 0; i < specs.size(); ++i) style_col[i] = specs[i].style[s];
    for (std::size_t l = 0; l < dl; ++l) {
      for (std::size_t i = 0; i < specs.size(); ++i) latent_col[i] = z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
      corr[s][l] = std::abs(pearson_rho(style_col, latent_col));
    }
  }
  return max_weight_assignment(corr).total / static_cast<double>(std::min(ds, dl));
}

EvalReport evaluate(const PecanModel& model, const LabeledDataset& eval_set) {
  const auto& specs = eval_set.require_specs();
  if (eval_set.size() == 0) fail(ErrorCode::kDegenerate, "evaluation set is empty");
  const Eigen::MatrixXd x = model.model_inputs(eval_set.trajectories());
  const auto enc = model.encode_all(eval_set.trajectories());
  Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(x.rows(), static_cast<Eigen::Index>(model.d_tau() + model.d_theta()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) codes(r, static_cast<Eigen::Index>(enc.task[static_cast<std::size_t>(r)])) = 1.0;
  codes.rightCols(static_cast<Eigen::Index>(model.d_theta())) = enc.style;
  const Eigen::MatrixXd xhat = model.decode_normalized(codes);

  std::vector<std::size_t> true_ids;
  true_ids.reserve(specs.size());
  for (const auto& s : specs) true_ids.push_back(s.task_id);

  EvalReport r;
  r.task_accuracy = task_accuracy(enc.task, true_ids);
  r.trajectory_error = trajectory_error(x, xhat);
  r.inconsistency = inconsistency(enc.style, specs);
  r.monotonicity = monotonicity(enc.style, specs);
  r.disentanglement = disentanglement(enc.style, specs);
  r.seed = model.seed();
  r.n_eval = eval_set.size();
  return r;
}

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["task_accuracy"] = report.task_accuracy;
  j["trajectory_error"] = report.trajectory_error;
  j["inconsistency"] = report.inconsistency;
  j["monotonicity"] = report.monotonicity;
  j["disentanglement"] = report.disentanglement;
  j["seed"] = report.seed;
  j["n_eval"] = report.n_eval;
  return j.dump() + "\n";
}

EvalReport eval_report_from_json(std::string_view text) {
  using namespace jsonutil;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, fmt::format("report is not valid JSON: {}", e.what()));
  }
  EvalReport r;
  r.task_accuracy = get<double>(j, "task_accuracy", "task_accuracy");
  r.trajectory_error = get<double>(j, "trajectory_error", "trajectory_error");
  r.inconsistency = get<double>(j, "inconsistency", "inconsistency");
  r.monotonicity = get<double>(j, "monotonicity", "monotonicity");
  r.disentanglement = get<double>(j, "disentanglement", "disentanglement");
  r.seed = get<std::uint64_t>(j, "seed", "seed");
  r.n_eval = get<std::size_t>(j, "n_eval", "n_eval");
  return r;
}

}  // namespace pecan
