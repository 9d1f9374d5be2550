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
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pecan/envgen.hpp"
#include "pecan/io.hpp"
#include "test_support.hpp"

namespace pecan {
namespace {

using testing::error_code_of;

TEST(Driving, FreeRoadReachesTheSpeedLimit) {
  DrivingConfig open;
  open.stop_x = 1e6;
  open.lead_start_gap = 1e6;
  for (double v : {40.0, 70.0, 100.0}) {
    const auto [t, s] = simulate_driving(DrivingTask::kHighway, {v, 20.0}, 100, open);
    EXPECT_NEAR(summarize_driving(t, open.dt).max_speed_kmh, v, 1.0);
  }
}

TEST(Driving, SpeedNeverExceedsTheStyleLimit) {
  for (double v = 40.0; v <= 100.0; v += 6.0) {
    for (auto task : {DrivingTask::kHighway, DrivingTask::kIntersection}) {
      const auto [t, s] = simulate_driving(task, {v, 20.0});
      EXPECT_LE(summarize_driving(t, 0.4).max_speed_kmh, v + 1e-9);
    }
  }
}

TEST(Driving, HighwayKeepsTheMinimumGap) {
  for (double d = 10.0; d <= 30.0; d += 2.5) {
    for (double v : {40.0, 70.0, 100.0}) {
      const auto [t, s] = simulate_driving(DrivingTask::kHighway, {v, d});
      EXPECT_GE(summarize_driving(t, 0.4).min_gap_ft, d - 0.5) << "v=" << v << " d=" << d;
    }
  }
}

TEST(Driving, LargerGapStylesStopFartherBack) {
  for (auto task : {DrivingTask::kHighway, DrivingTask::kIntersection}) {
    const auto [near, s1] = simulate_driving(task, {70.0, 10.0});
    const auto [far, s2] = simulate_driving(task, {70.0, 30.0});
    EXPECT_GT(near.states()[near.states().size() - 4], far.states()[far.states().size() - 4]);
  }
}

TEST(Driving, OutOfRangeStylesAreClampedAndRecorded) {
  const auto [t, s] = simulate_driving(DrivingTask::kIntersection, {150.0, 0.0});
  EXPECT_EQ(s.style, (std::vector<double>{100.0, 10.0}));
  EXPECT_EQ(s.task_id, 1u);
}

TEST(Driving, MatchesTheFrozenHighwayRollout) {
  const LabeledDataset frozen = load_dataset(testing::fixture("highway_70_20.json"));
  ASSERT_EQ(frozen.size(), 1u);
  const auto [t, s] = simulate_driving(DrivingTask::kHighway, {70.0, 20.0});
  EXPECT_EQ(frozen.trajectories()[0], t);
  EXPECT_EQ(frozen.require_specs()[0], s);
}

TEST(Driving, StatesAdvanceByTheirActions) {
  const auto [t, s] = simulate_driving(DrivingTask::kHighway, {90.0, 15.0});
  for (std::size_t k = 0; k + 1 < t.steps(); ++k) {
    EXPECT_NEAR(t.state(k + 1)[0], t.state(k)[0] + t.action(k)[0], 1e-9);
    EXPECT_EQ(t.state(k + 1)[1], t.state(k)[1] + t.action(k)[1]);
  }
}

TEST(Driving, SummaryNeedsTheDrivingLayout) {
  const Trajectory t(2, 2, 2, {0, 0, 1, 1}, {1, 1, 1, 1});
  EXPECT_EQ(error_code_of([&] { summarize_driving(t, 0.4); }), ErrorCode::kShape);
}

TEST(Polynomial, ConstantMirrorAndIdentityCases) {
  const auto [c, cs] = gen_polynomial({1.0, {2.0}}, 11);
  for (std::size_t k = 0; k < 11; ++k) EXPECT_EQ(c.state(k)[1], 2.0);
  const auto [m, ms] = gen_polynomial({-1.0, {2.0}}, 11);
  for (std::size_t k = 0; k < 11; ++k) EXPECT_EQ(m.state(k)[1], -2.0);
  EXPECT_EQ(ms.task_id, 1u);
  const auto [id, is] = gen_polynomial({1.0, {0.0, 1.0}}, 21);
  for (std::size_t k = 0; k < 21; ++k) EXPECT_NEAR(id.state(k)[1], id.state(k)[0], 1e-15);
  EXPECT_DOUBLE_EQ(id.state(0)[0], -1.0);
  EXPECT_DOUBLE_EQ(id.state(20)[0], 1.0);
}

TEST(Polynomial, ActionsAreStateDeltas) {
  const auto [t, s] = gen_polynomial({1.0, {0.2, 0.6, 1.0}}, 30);
  for (std::size_t k = 0; k + 1 < t.steps(); ++k) {
    EXPECT_NEAR(t.action(k)[0], t.state(k + 1)[0] - t.state(k)[0], 1e-15);
    EXPECT_NEAR(t.action(k)[1], t.state(k + 1)[1] - t.state(k)[1], 1e-15);
  }
  EXPECT_EQ(t.action(29)[1], t.action(28)[1]);
  EXPECT_EQ(error_code_of([] { gen_polynomial({0.5, {1.0}}); }), ErrorCode::kDomain);
  EXPECT_EQ(error_code_of([] { gen_polynomial({1.0, {}}); }), ErrorCode::kDomain);
}

TEST(DrivingDataset, StandardTrainingSetLayout) {
  const auto& d = testing::driving_train();
  const auto& specs = d.require_specs();
  ASSERT_EQ(d.size(), 16u);
  std::size_t highway = 0;
  for (const auto& s : specs) highway += s.task_id == 0;
  EXPECT_EQ(highway, 8u);
  ASSERT_EQ(d.labels().size(), 4u);
  std::set<std::vector<double>> corners;
  for (const auto& g : d.labels()) {
    ASSERT_EQ(g.member_ids.size(), 2u);
    const auto& a = specs[g.member_ids[0]];
    const auto& b = specs[g.member_ids[1]];
    EXPECT_NE(a.task_id, b.task_id);
    EXPECT_EQ(a.style, b.style);
    for (std::size_t k = 0; k < 2; ++k) {
      const double lo = k == 0 ? 40.0 : 10.0;
      const double hi = k == 0 ? 100.0 : 30.0;
      EXPECT_TRUE(a.style[k] == lo || a.style[k] == hi);
    }
    corners.insert(a.style);
  }
  EXPECT_EQ(corners.size(), 4u);
  EXPECT_EQ(d.meta().task_names, (std::vector<std::string>{"Highway", "Intersection"}));
}

TEST(DrivingDataset, GenerationIsDeterministicPerSeed) {
  DatasetSpec s;
  EXPECT_EQ(build_dataset(s), testing::driving_train());
  s.seed = 5;
  EXPECT_NE(build_dataset(s), testing::driving_train());
}

TEST(DrivingDataset, EvaluationGridHoldsEveryStyleForBothTasks) {
  const auto& e = testing::driving_eval();
  EXPECT_TRUE(e.labels().empty());
  const auto grid = style_grid(DatasetSpec{});
  ASSERT_EQ(e.size(), 2 * grid.size());
  std::map<std::vector<double>, std::set<std::size_t>> tasks;
  for (const auto& s : e.require_specs()) tasks[s.style].insert(s.task_id);
  EXPECT_EQ(tasks.size(), grid.size());
  for (const auto& [style, t] : tasks) EXPECT_EQ(t.size(), 2u);
}

TEST(DrivingDataset, OneDimensionalSetLabelsTwoSpeedExtremes) {
  const auto& d = testing::driving_1d_train();
  ASSERT_EQ(d.num_classes(), 2u);
  std::set<double> speeds;
  for (const auto& g : d.labels()) speeds.insert(d.require_specs()[g.member_ids[0]].style[0]);
  EXPECT_EQ(speeds, (std::set<double>{40.0, 100.0}));
}

TEST(DrivingDataset, LabelModes) {
  DatasetSpec none;
  none.label_mode = LabelMode::kNone;
  const LabeledDataset n = build_dataset(none);
  EXPECT_TRUE(n.labels().empty());
  EXPECT_EQ(n.trajectories(), testing::driving_train().trajectories());

  DatasetSpec mid;
  mid.label_mode = LabelMode::kIntermediates;
  const LabeledDataset m = build_dataset(mid);
  ASSERT_EQ(m.num_classes(), 4u);
  for (const auto& g : m.labels()) {
    const auto& style = m.require_specs()[g.member_ids[0]].style;
    EXPECT_TRUE(style[0] == 55.0 || style[0] == 85.0) << style[0];
    EXPECT_TRUE(style[1] == 15.0 || style[1] == 25.0) << style[1];
  }
  // Unlabeled demonstrations are shared with the extremes set.
  for (std::size_t i = 8; i < 16; ++i) EXPECT_EQ(m.trajectories()[i], n.trajectories()[i]);
}

TEST(PolynomialDataset, SizesFollowTheStyleDimension) {
  DatasetSpec s;
  s.environment = Environment::kPolynomial;
  s.style_dims = 4;
  s.num_demos = 0;
  const LabeledDataset train = build_dataset(s);
  EXPECT_EQ(train.size(), 40u);
  EXPECT_EQ(train.num_classes(), 16u);
  const LabeledDataset eval = build_dataset(testing::eval_spec_for(s));
  EXPECT_EQ(eval.size(), 2u * 81u);
  EXPECT_EQ(style_grid(s).size(), 81u);
  EXPECT_EQ(train.meta().environment, "polynomial");
}

TEST(Sweep, SetsAreNestedAndShareTheExtremes) {
  const std::vector<std::size_t> sizes = {8, 16, 32, 64};
  const auto sets = sweep_datasets(DatasetSpec{}, sizes);
  ASSERT_EQ(sets.size(), 4u);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    EXPECT_EQ(sets[i].size(), sizes[i]);
    EXPECT_EQ(sets[i].labels(), sets[0].labels());
    for (std::size_t k = 0; k < 8; ++k) {
      const auto& style = sets[i].require_specs()[k].style;
      EXPECT_TRUE(style[0] == 40.0 || style[0] == 100.0);
    }
    if (i == 0) continue;
    for (std::size_t k = 0; k < sets[i - 1].size(); ++k) EXPECT_EQ(sets[i].trajectories()[k], sets[i - 1].trajectories()[k]);
  }
  EXPECT_EQ(sets[1], testing::driving_train());
  std::set<std::vector<double>> styles;
  for (const auto& s : sets[3].require_specs()) styles.insert(s.style);
  EXPECT_GE(styles.size(), 20u);
}

TEST(Sweep, ImpossibleSizesAreSpecErrors) {
  EXPECT_EQ(error_code_of([] { sweep_datasets(DatasetSpec{}, {6}); }), ErrorCode::kSpec);
  EXPECT_EQ(error_code_of([] { sweep_datasets(DatasetSpec{}, {100000}); }), ErrorCode::kSpec);
  DatasetSpec eval;
  eval.split = Split::kEval;
  EXPECT_EQ(error_code_of([&] { sweep_datasets(eval, {16}); }), ErrorCode::kSpec);
}

TEST(DatasetSpecJson, RoundtripsAndValidates) {
  DatasetSpec s;
  s.environment = Environment::kPolynomial;
  s.style_dims = 3;
  s.seed = 4;
  const DatasetSpec back = dataset_spec_from_json(dataset_spec_to_json(s));
  EXPECT_EQ(build_dataset(back), build_dataset(s));
  EXPECT_EQ(error_code_of([] { dataset_spec_from_json(R"({"colour": 1})"); }), ErrorCode::kParse);
  EXPECT_EQ(error_code_of([] { dataset_spec_from_json(R"({"style_dims": 3})"); }), ErrorCode::kSpec);
}

}  // namespace
}  // namespace pecan
