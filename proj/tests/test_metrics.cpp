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
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "pecan/io.hpp"
#include "pecan/metrics.hpp"
#include "pecan/random.hpp"
#include "test_support.hpp"

namespace pecan {
namespace {

using testing::error_code_of;

TEST(Correlation, SpearmanExamples) {
  EXPECT_NEAR(spearman_rho(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{5, 6, 7, 8, 7.5}), 0.9, 1e-12);
  EXPECT_NEAR(spearman_rho(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{1, 8, 27, 64, 125}), 1.0, 1e-12);
  EXPECT_NEAR(spearman_rho(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{2, 1, 4, 3, 5}), 0.8, 1e-12);
  EXPECT_NEAR(spearman_rho(std::vector<double>{1, 2, 3}, std::vector<double>{9, 4, 1}), -1.0, 1e-12);
}

TEST(Correlation, TiesShareTheirAverageRank) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 20, 5}), (std::vector<double>{2.0, 3.5, 3.5, 1.0}));
}

TEST(Correlation, ConstantInputGivesZeroAndLengthsMustAgree) {
  EXPECT_EQ(pearson_rho(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), 0.0);
  EXPECT_EQ(spearman_rho(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}), 0.0);
  EXPECT_EQ(error_code_of([] { pearson_rho(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}); }), ErrorCode::kShape);
  EXPECT_EQ(error_code_of([] { spearman_rho(std::vector<double>{1}, std::vector<double>{1}); }), ErrorCode::kShape);
}

double direct_pearson(const std::vector<double>& u, const std::vector<double>& v) {
  const double n = static_cast<double>(u.size());
  double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    su += u[i];
    sv += v[i];
    suu += u[i] * u[i];
    svv += v[i] * v[i];
    suv += u[i] * v[i];
  }
  return (n * suv - su * sv) / std::sqrt((n * suu - su * su) * (n * svv - sv * sv));
}

TEST(Correlation, AgreesWithDirectFormulasOnRandomVectors) {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + uniform_index(rng, 30);
    std::vector<double> u(n);
    std::vector<double> v(n);
    for (auto& x : u) x = uniform(rng, -1, 1);
    for (auto& x : v) x = uniform(rng, -1, 1);
    ASSERT_NEAR(pearson_rho(u, v), direct_pearson(u, v), 1e-9);
    // Distinct values: the rank-difference formula applies.
    const auto ru = average_ranks(u);
    const auto rv = average_ranks(v);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (ru[i] - rv[i]) * (ru[i] - rv[i]);
    const double nn = static_cast<double>(n);
    ASSERT_NEAR(spearman_rho(u, v), 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0)), 1e-9);
  }
}

// Best partial one-to-one map by exhaustive search.
double brute_force_accuracy(const std::vector<std::size_t>& latent, const std::vector<std::size_t>& truth,
                            std::size_t k, std::size_t c) {
  std::vector<int> map(k, -1);
  std::vector<bool> used(c, false);
  double best = 0.0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      double hit = 0.0;
      for (std::size_t n = 0; n < latent.size(); ++n) hit += map[latent[n]] == static_cast<int>(truth[n]);
      best = std::max(best, hit);
      return;
    }
    map[i] = -1;
    rec(i + 1);
    for (std::size_t t = 0; t < c; ++t) {
      if (used[t]) continue;
      used[t] = true;
      map[i] = static_cast<int>(t);
      rec(i + 1);
      used[t] = false;
      map[i] = -1;
    }
  };
  rec(0);
  return best / static_cast<double>(latent.size());
}

TEST(TaskAccuracy, MatchesExhaustiveSearch) {
  Rng rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 1 + uniform_index(rng, 3);
    const std::size_t c = 1 + uniform_index(rng, 3);
    const std::size_t n = 1 + uniform_index(rng, 6);
    std::vector<std::size_t> latent(n);
    std::vector<std::size_t> truth(n);
    for (auto& x : latent) x = uniform_index(rng, k);
    for (auto& x : truth) x = uniform_index(rng, c);
    ASSERT_NEAR(task_accuracy(latent, truth), brute_force_accuracy(latent, truth, k, c), 1e-12);
  }
}

TEST(TaskAccuracy, Examples) {
  // Confusion [[2, 1], [0, 3]].
  const std::vector<std::size_t> latent = {0, 0, 0, 1, 1, 1};
  const std::vector<std::size_t> truth = {0, 0, 1, 1, 1, 1};
  EXPECT_NEAR(task_accuracy(latent, truth), 5.0 / 6.0, 1e-12);
  // A swapped labelling is still perfect.
  EXPECT_EQ(task_accuracy(std::vector<std::size_t>{1, 1, 0, 0}, std::vector<std::size_t>{0, 0, 1, 1}), 1.0);
  // A single latent task explains one of two balanced tasks.
  EXPECT_EQ(task_accuracy(std::vector<std::size_t>{0, 0, 0, 0}, std::vector<std::size_t>{0, 1, 0, 1}), 0.5);
  const std::vector<std::vector<double>> hots = {{0, 1}, {1, 0}};
  EXPECT_EQ(task_accuracy(hots, std::vector<std::size_t>{0, 1}), 1.0);
  const std::vector<std::vector<double>> soft = {{0.5, 0.5}};
  EXPECT_EQ(error_code_of([&] { task_accuracy(soft, std::vector<std::size_t>{0}); }), ErrorCode::kDomain);
}

TEST(TrajectoryError, IdentityAndConstantOffset) {
  Rng rng(3);
  Eigen::MatrixXd x(7, 12);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = uniform(rng, -1, 1);
  EXPECT_EQ(trajectory_error(x, x), 0.0);
  EXPECT_NEAR(trajectory_error(x, x.array() + 0.3), 0.09, 1e-12);
  EXPECT_EQ(error_code_of([&] { trajectory_error(x, Eigen::MatrixXd::Zero(7, 11)); }), ErrorCode::kShape);
}

std::vector<StyleSpec> specs_of(const std::vector<std::pair<std::size_t, std::vector<double>>>& v) {
  std::vector<StyleSpec> s;
  for (const auto& [t, style] : v) s.push_back({t, style});
  return s;
}

TEST(Inconsistency, AveragesCrossTaskPairsOfIdenticalStyle) {
  const auto specs = specs_of({{0, {1.0}}, {1, {1.0}}, {0, {2.0}}, {1, {2.0}}, {0, {3.0}}});
  Eigen::MatrixXd z(5, 2);
  z << 0, 0, 0.2, 0, 1, 1, 1, 1.4, -1, -1;
  EXPECT_NEAR(inconsistency(z, specs), 0.3, 1e-12);
  const auto lonely = specs_of({{0, {1.0}}, {0, {1.0}}, {1, {2.0}}});
  EXPECT_EQ(error_code_of([&] { inconsistency(Eigen::MatrixXd::Zero(3, 2), lonely); }), ErrorCode::kDegenerate);
}

std::vector<StyleSpec> dyadic_grid() {
  std::vector<StyleSpec> s;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) s.push_back({0, {0.25 * i, 0.25 * j}});
  return s;
}

Eigen::MatrixXd as_latent(const std::vector<StyleSpec>& specs) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(specs.size()), 2);
  for (std::size_t i = 0; i < specs.size(); ++i) z.row(static_cast<Eigen::Index>(i)) << specs[i].style[0], specs[i].style[1];
  return z;
}

TEST(Monotonicity, IdentityAndNegationArePerfect) {
  const auto specs = dyadic_grid();
  const Eigen::MatrixXd z = as_latent(specs);
  EXPECT_NEAR(monotonicity(z, specs), 1.0, 1e-12);
  EXPECT_NEAR(monotonicity(-z, specs), 1.0, 1e-12);
}

TEST(Monotonicity, RangesAreScaledPerDimension) {
  auto specs = dyadic_grid();
  const Eigen::MatrixXd z = as_latent(specs);
  for (auto& s : specs) {
    s.style[0] = 40.0 + 240.0 * s.style[0];
    s.style[1] = 10.0 + 80.0 * s.style[1];
  }
  EXPECT_NEAR(monotonicity(z, specs), 1.0, 1e-9);
}

TEST(Monotonicity, RandomLatentsScoreNearZero) {
  Rng rng(4);
  const auto specs = dyadic_grid();
  double total = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd z(25, 2);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = uniform(rng, -1, 1);
    total += monotonicity(z, specs);
  }
  EXPECT_LT(total / 100.0, 0.15);
}

TEST(Disentanglement, AxisAlignedSwappedAndRotated) {
  const auto specs = dyadic_grid();
  const Eigen::MatrixXd z = as_latent(specs);
  EXPECT_NEAR(disentanglement(z, specs), 1.0, 1e-12);
  Eigen::MatrixXd swapped(25, 2);
  swapped << z.col(1), z.col(0);
  EXPECT_NEAR(disentanglement(swapped, specs), 1.0, 1e-12);
  const double c = std::cos(M_PI / 4);
  Eigen::Matrix2d r;
  r << c, -c, c, c;
  EXPECT_NEAR(disentanglement(z * r.transpose(), specs), std::sqrt(0.5), 0.03);
}

TEST(Disentanglement, OneStyleManyLatentsUsesTheBestDimension) {
  std::vector<StyleSpec> specs;
  Eigen::MatrixXd z(10, 3);
  for (int i = 0; i < 10; ++i) {
    specs.push_back({0, {static_cast<double>(i)}});
    z.row(i) << std::sin(i), 0.5 * i, std::cos(3.0 * i);
  }
  EXPECT_NEAR(disentanglement(z, specs), 1.0, 1e-12);
}

TEST(Metrics, InvariantToLatentSignFlips) {
  Rng rng(5);
  std::vector<StyleSpec> specs;
  for (const auto& s : dyadic_grid()) {
    specs.push_back({0, s.style});
    specs.push_back({1, s.style});
  }
  Eigen::MatrixXd z(static_cast<Eigen::Index>(specs.size()), 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = uniform(rng, -1, 1);
  Eigen::MatrixXd f = z;
  f.col(1) *= -1.0;
  EXPECT_NEAR(inconsistency(f, specs), inconsistency(z, specs), 1e-12);
  EXPECT_NEAR(monotonicity(f, specs), monotonicity(z, specs), 1e-12);
  EXPECT_NEAR(disentanglement(f, specs), disentanglement(z, specs), 1e-12);
}

TEST(EvalReportJson, Roundtrips) {
  EvalReport r{0.9, 0.01, 0.2, 0.7, 0.8, 3, 352};
  EXPECT_EQ(eval_report_from_json(eval_report_to_json(r)), r);
  EXPECT_EQ(error_code_of([] { eval_report_from_json("{}"); }), ErrorCode::kParse);
}

// Library defaults, seed 0, on the standard sets: frozen from a reference run.
TEST(Evaluate, DefaultRunMatchesTheFrozenReport) {
  const EvalReport frozen = eval_report_from_json(read_text_file(testing::fixture("driving_seed0_eval_report.json")));
  const EvalReport r = evaluate(testing::default_run_2d().model, testing::driving_eval());
  EXPECT_EQ(r.n_eval, 352u);
  EXPECT_EQ(r.seed, 0u);
  EXPECT_NEAR(r.task_accuracy, frozen.task_accuracy, 1e-9);
  EXPECT_NEAR(r.trajectory_error, frozen.trajectory_error, 1e-9);
  EXPECT_NEAR(r.inconsistency, frozen.inconsistency, 1e-9);
  EXPECT_NEAR(r.monotonicity, frozen.monotonicity, 1e-9);
  EXPECT_NEAR(r.disentanglement, frozen.disentanglement, 1e-9);
}

TEST(Evaluate, ReferenceRunIsWellFormed) {
  const EvalReport r = evaluate(testing::reference_run_2d().model, testing::driving_eval());
  EXPECT_EQ(r.task_accuracy, 1.0);
  for (double v : {r.monotonicity, r.disentanglement}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_GT(r.trajectory_error, 0.0);
}

TEST(Evaluate, RequiresGroundTruth) {
  const auto& e = testing::driving_eval();
  const LabeledDataset bare(e.trajectories(), std::nullopt, {}, 2);
  EXPECT_EQ(error_code_of([&] { evaluate(testing::reference_run_2d().model, bare); }), ErrorCode::kValidation);
}

}  // namespace
}  // namespace pecan
