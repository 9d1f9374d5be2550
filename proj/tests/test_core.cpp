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
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "pecan/core.hpp"
#include "pecan/random.hpp"
#include "test_support.hpp"

namespace pecan {
namespace {

using testing::error_code_of;

Trajectory line(std::size_t steps, double slope, double offset = 0.0) {
  std::vector<double> s;
  std::vector<double> a;
  for (std::size_t t = 0; t < steps; ++t) {
    s.push_back(offset + slope * static_cast<double>(t));
    a.push_back(slope);
  }
  return Trajectory(steps, 1, 1, s, a);
}

TEST(Trajectory, RejectsInvalidContents) {
  EXPECT_EQ(error_code_of([] { Trajectory(1, 1, 1, {0.0}, {0.0}); }), ErrorCode::kValidation);
  EXPECT_EQ(error_code_of([] { Trajectory(2, 1, 1, {0.0, 1.0}, {0.0}); }), ErrorCode::kValidation);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(error_code_of([&] { Trajectory(2, 1, 1, {0.0, nan}, {0.0, 0.0}); }), ErrorCode::kValidation);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(error_code_of([&] { Trajectory(2, 1, 1, {0.0, 0.0}, {inf, 0.0}); }), ErrorCode::kValidation);
}

TEST(Trajectory, FlattenInterleavesStatesAndActions) {
  const Trajectory t(2, 2, 1, {1, 2, 3, 4}, {5, 6});
  EXPECT_EQ(t.flatten(), (std::vector<double>{1, 2, 5, 3, 4, 6}));
  EXPECT_EQ(t.flat_size(), 6u);
}

TEST(Trajectory, UnflattenInvertsFlattenForRandomVectors) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t steps = 2 + uniform_index(rng, 30);
    const std::size_t sd = 1 + uniform_index(rng, 4);
    const std::size_t ad = 1 + uniform_index(rng, 3);
    std::vector<double> v(steps * (sd + ad));
    for (auto& x : v) x = uniform(rng, -100, 100);
    const Trajectory t = Trajectory::unflatten(v, steps, sd, ad);
    ASSERT_EQ(t.flatten(), v);
  }
  const std::vector<double> bad(7, 0.0);
  EXPECT_EQ(error_code_of([&] { Trajectory::unflatten(bad, 2, 2, 2); }), ErrorCode::kShape);
}

TEST(Trajectory, DownsampleKeepsEndpointsAndInterpolatesLinearly) {
  const Trajectory t = line(100, 0.5, 3.0);
  const Trajectory d = t.downsample(20);
  ASSERT_EQ(d.steps(), 20u);
  EXPECT_DOUBLE_EQ(d.state(0)[0], 3.0);
  EXPECT_DOUBLE_EQ(d.state(19)[0], 3.0 + 0.5 * 99.0);
  for (std::size_t k = 0; k < 20; ++k) {
    const double u = 99.0 * static_cast<double>(k) / 19.0;
    EXPECT_NEAR(d.state(k)[0], 3.0 + 0.5 * u, 1e-12);
    EXPECT_NEAR(d.action(k)[0], 0.5, 1e-12);
  }
  EXPECT_EQ(t.downsample(100), t);
}

TEST(StyleLabelGroup, OneHotHasSingleUnitAtClass) {
  const StyleLabelGroup g{2, {0, 1}};
  EXPECT_EQ(g.one_hot(4), (std::vector<double>{0, 0, 1, 0}));
}

TEST(LabeledDataset, ValidatesLabelInvariants) {
  std::vector<Trajectory> ts = {line(3, 1), line(3, 2), line(3, 3)};
  std::vector<StyleSpec> specs = {{0, {1.0}}, {1, {1.0}}, {0, {2.0}}};
  EXPECT_NO_THROW(LabeledDataset(ts, specs, {{0, {0, 1}}}, 2));
  // Member out of range.
  EXPECT_EQ(error_code_of([&] { LabeledDataset(ts, specs, {{0, {0, 5}}}, 2); }), ErrorCode::kValidation);
  // Member shared by two groups.
  EXPECT_EQ(error_code_of([&] { LabeledDataset(ts, specs, {{0, {0, 1}}, {1, {1}}}, 2); }), ErrorCode::kValidation);
  // Empty group.
  EXPECT_EQ(error_code_of([&] { LabeledDataset(ts, specs, {{0, {}}}, 2); }), ErrorCode::kValidation);
  // Labels must span tasks when ground truth is known.
  EXPECT_EQ(error_code_of([&] { LabeledDataset(ts, specs, {{0, {0, 2}}}, 2); }), ErrorCode::kValidation);
  // Specs must be parallel to trajectories.
  std::vector<StyleSpec> short_specs = {{0, {1.0}}};
  EXPECT_EQ(error_code_of([&] { LabeledDataset(ts, short_specs, {}, 2); }), ErrorCode::kValidation);
  // Task id outside the task count.
  std::vector<StyleSpec> bad_task = {{0, {1.0}}, {3, {1.0}}, {0, {2.0}}};
  EXPECT_EQ(error_code_of([&] { LabeledDataset(ts, bad_task, {}, 2); }), ErrorCode::kValidation);
}

TEST(LabeledDataset, TrainingViewCarriesNoGroundTruth) {
  const auto& d = testing::driving_train();
  const TrainingData view = d.training_view();
  EXPECT_EQ(view.trajectories.size(), d.size());
  EXPECT_EQ(view.labels.size(), d.num_classes());
  EXPECT_EQ(view.num_tasks, 2u);
  // TrainingData has no member through which specs could be reached.
  static_assert(sizeof(TrainingData) == sizeof(std::span<const Trajectory>) +
                                            sizeof(std::span<const StyleLabelGroup>) + sizeof(std::size_t));
}

TEST(Normalization, MapsTrainingRangeOntoUnitInterval) {
  const std::vector<std::vector<double>> rows = {{0.0, 5.0, -2.0}, {10.0, 5.0, 2.0}, {4.0, 5.0, 0.0}};
  const Normalization n = Normalization::fit(rows);
  EXPECT_EQ(n.apply(rows[0]), (std::vector<double>{-1.0, 0.0, -1.0}));
  EXPECT_EQ(n.apply(rows[1]), (std::vector<double>{1.0, 0.0, 1.0}));
  EXPECT_NEAR(n.apply(rows[2])[0], -0.2, 1e-15);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> v = {uniform(rng, -5, 15), 5.0, uniform(rng, -4, 4)};
    const auto back = n.invert(n.apply(v));
    for (std::size_t k = 0; k < v.size(); ++k) EXPECT_NEAR(back[k], v[k], 1e-12);
  }
}

}  // namespace
}  // namespace pecan
