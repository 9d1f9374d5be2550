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
#include "pecan/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "json.hpp"
#include "pecan/error.hpp"
#include "pecan/json_util.hpp"
#include "pecan/random.hpp"

namespace pecan {

namespace {

constexpr double kVMin = 40.0;
constexpr double kVMax = 100.0;
constexpr double kDMin = 10.0;
constexpr double kDMax = 30.0;
constexpr std::size_t kSpeedLevels = 11;
constexpr std::size_t kGapLevels = 16;
constexpr double kFixedGapFt = 20.0;

constexpr std::uint64_t kIntermediateStream = 11;

// Largest speed that still lets the ego stop behind an obstacle moving at
// obstacle_speed, keeping d_min: x + v dt + v^2/2b <= obs' + v_o^2/2b - d_min.
double safe_speed(double x, double obstacle_next, double obstacle_speed, double d_min, const DrivingConfig& cfg) {
  const double c = obstacle_next + obstacle_speed * obstacle_speed / (2.0 * cfg.decel) - d_min - x;
  const double gipps = c > 0.0 ? cfg.decel * (-cfg.dt + std::sqrt(cfg.dt * cfg.dt + 2.0 * c / cfg.decel)) : 0.0;
  const double hard = std::max(0.0, (obstacle_next - d_min - x) / cfg.dt);
  return std::min(gipps, hard);
}

std::size_t driving_groups(std::size_t style_dims) { return style_dims == 1 ? 2 : 4; }

std::size_t pow_size(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Per-dimension (low, high) ranges of the style space.
std::vector<std::pair<double, double>> style_ranges(const DatasetSpec& spec) {
  if (spec.environment == Environment::kDriving) {
    if (spec.style_dims == 1) return {{kVMin, kVMax}};
    return {{kVMin, kVMax}, {kDMin, kDMax}};
  }
  return std::vector<std::pair<double, double>>(spec.style_dims, {spec.poly_grid.front(), spec.poly_grid.back()});
}

// Label corner g: bit k (from the most significant) 0 selects the high end.
// For two dimensions this yields [hi/hi, hi/lo, lo/hi, lo/lo].
std::vector<double> corner_style(const DatasetSpec& spec, std::size_t g, double lo_frac, double hi_frac) {
  const auto ranges = style_ranges(spec);
  const std::size_t d = ranges.size();
  std::vector<double> style(d);
  for (std::size_t k = 0; k < d; ++k) {
    const bool low = (g >> (d - 1 - k)) & 1U;
    const auto [lo, hi] = ranges[k];
    style[k] = lo + (hi - lo) * (low ? lo_frac : hi_frac);
  }
  return style;
}

std::pair<Trajectory, StyleSpec> render(const DatasetSpec& spec, std::size_t task, const std::vector<double>& style) {
  if (spec.environment == Environment::kDriving) {
    DrivingStyle s{style[0], spec.style_dims == 1 ? kFixedGapFt : style[1]};
    auto out = simulate_driving(static_cast<DrivingTask>(task), s, spec.steps, spec.driving);
    out.second.style = style;
    return out;
  }
  PolySpec p{task == 0 ? 1.0 : -1.0, style, spec.poly_x_lo, spec.poly_x_hi};
  return gen_polynomial(p, spec.steps);
}

DatasetMeta make_meta(const DatasetSpec& spec) {
  DatasetMeta meta;
  if (spec.environment == Environment::kDriving) {
    meta.environment = "driving";
    meta.task_names = {"Highway", "Intersection"};
    meta.style_names = {"v_max_kmh"};
    if (spec.style_dims == 2) meta.style_names.push_back("d_min_ft");
    meta.dt = spec.driving.dt;
  } else {
    meta.environment = "polynomial";
    meta.task_names = {"b=+1", "b=-1"};
    for (std::size_t k = 0; k < spec.style_dims; ++k) meta.style_names.push_back(fmt::format("a{}", k));
  }
  return meta;
}

bool is_corner(const std::vector<double>& style, const std::vector<std::pair<double, double>>& ranges) {
  for (std::size_t k = 0; k < style.size(); ++k) {
    if (style[k] != ranges[k].first && style[k] != ranges[k].second) return false;
  }
  return true;
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

struct TrainingPlan {
  std::vector<std::vector<double>> labeled_styles;  // one per group
  std::vector<std::pair<std::size_t, std::size_t>> intermediates;  // (task, grid index), in id order
};

// Full ordering of the largest training set the grid supports; any training
// set is a prefix of it, which makes sweeps nested by construction.
TrainingPlan plan_training(const DatasetSpec& spec) {
  TrainingPlan plan;
  const std::size_t groups =
      spec.environment == Environment::kDriving ? driving_groups(spec.style_dims) : pow_size(2, spec.style_dims);
  const bool intermediate = spec.label_mode == LabelMode::kIntermediates;
  for (std::size_t g = 0; g < groups; ++g) {
    plan.labeled_styles.push_back(intermediate ? corner_style(spec, g, 0.25, 0.75) : corner_style(spec, g, 0.0, 1.0));
  }
  const auto grid = style_grid(spec);
  const auto ranges = style_ranges(spec);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!is_corner(grid[i], ranges)) pool.push_back(i);
  }
  // The same stream regardless of label mode, so ablations share intermediates.
  Rng rng = derive_rng(spec.seed, kIntermediateStream);
  std::vector<std::size_t> per_task[2] = {pool, pool};
  shuffle(per_task[0], rng);
  shuffle(per_task[1], rng);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    plan.intermediates.emplace_back(0, per_task[0][i]);
    plan.intermediates.emplace_back(1, per_task[1][i]);
  }
  return plan;
}

std::size_t default_demos(const DatasetSpec& spec) {
  if (spec.num_demos != 0) return spec.num_demos;
  return spec.environment == Environment::kPolynomial ? pow_size(3, spec.style_dims) / 2 : 16;
}

LabeledDataset build_training(const DatasetSpec& spec, std::size_t n, const TrainingPlan& plan) {
  const std::size_t labeled = 2 * plan.labeled_styles.size();
  if (n < labeled) {
    fail(ErrorCode::kSpec, fmt::format("{} demonstrations cannot hold {} labeled style groups spanning both tasks", n,
                                       plan.labeled_styles.size()));
  }
  if (n - labeled > plan.intermediates.size()) {
    fail(ErrorCode::kSpec, fmt::format("{} demonstrations exceed the {} available distinct demonstrations", n,
                                       labeled + plan.intermediates.size()));
  }
  std::vector<Trajectory> trajectories;
  std::vector<StyleSpec> specs;
  std::vector<StyleLabelGroup> labels;
  for (std::size_t g = 0; g < plan.labeled_styles.size(); ++g) {
    for (std::size_t task = 0; task < 2; ++task) {
      auto [traj, s] = render(spec, task, plan.labeled_styles[g]);
      trajectories.push_back(std::move(traj));
      specs.push_back(std::move(s));
    }
    if (spec.label_mode != LabelMode::kNone) labels.push_back({g, {2 * g, 2 * g + 1}});
  }
  const auto grid = style_grid(spec);
  for (std::size_t i = 0; i < n - labeled; ++i) {
    const auto [task, idx] = plan.intermediates[i];
    auto [traj, s] = render(spec, task, grid[idx]);
    trajectories.push_back(std::move(traj));
    specs.push_back(std::move(s));
  }
  return LabeledDataset(std::move(trajectories), std::move(specs), std::move(labels), 2, make_meta(spec));
}

}  // namespace

std::pair<Trajectory, StyleSpec> simulate_driving(DrivingTask task, DrivingStyle style, std::size_t steps,
                                                  const DrivingConfig& cfg) {
  if (steps < 2) fail(ErrorCode::kDomain, "a rollout needs at least 2 steps");
  if (!(cfg.dt > 0.0) || !(cfg.accel > 0.0) || !(cfg.decel > 0.0)) {
    fail(ErrorCode::kConfig, "driving dt, accel and decel must be positive");
  }
  const double v_kmh = std::clamp(style.v_max_kmh, kVMin, kVMax);
  const double d_ft = std::clamp(style.d_min_ft, kDMin, kDMax);
  const double v_max = v_kmh * kKmhToMs;
  const double d_min = d_ft * kFeetToMeters;
  const bool highway = task == DrivingTask::kHighway;

  double x = 0.0;
  double v = std::min(cfg.ego_start_speed, v_max);
  double ox = highway ? std::min(cfg.lead_start_gap, cfg.stop_x) : cfg.stop_x;
  double oy = highway ? 0.0 : cfg.cross_start_y;
  std::vector<double> states;
  std::vector<double> actions;
  states.reserve(steps * 4);
  actions.reserve(steps * 2);
  for (std::size_t t = 0; t < steps; ++t) {
    states.insert(states.end(), {x, 0.0, ox, oy});
    double v_next = std::min(v + cfg.accel * cfg.dt, v_max);
    double ox_next = ox;
    double oy_next = oy;
    if (highway) {
      ox_next = std::min(ox + cfg.lead_speed * cfg.dt, std::max(ox, cfg.stop_x));
      const double lead_v = ox_next < cfg.stop_x ? cfg.lead_speed : 0.0;
      if (ox - x <= cfg.sensor_range) v_next = std::min(v_next, safe_speed(x, ox_next, lead_v, d_min, cfg));
    } else {
      oy_next = oy + cfg.cross_speed * cfg.dt;
      // Hold before the crossing until the other car has cleared it by d_min.
      if (oy_next < d_min && cfg.stop_x - x <= cfg.sensor_range) {
        v_next = std::min(v_next, safe_speed(x, cfg.stop_x, 0.0, d_min, cfg));
      }
    }
    v_next = std::max(v_next, 0.0);
    actions.insert(actions.end(), {v_next * cfg.dt, 0.0});
    x += v_next * cfg.dt;
    v = v_next;
    ox = ox_next;
    oy = oy_next;
  }
  return {Trajectory(steps, 4, 2, std::move(states), std::move(actions)),
          StyleSpec{static_cast<std::size_t>(task), {v_kmh, d_ft}}};
}

std::pair<Trajectory, StyleSpec> gen_polynomial(const PolySpec& spec, std::size_t steps) {
  if (steps < 2) fail(ErrorCode::kDomain, "a polynomial trajectory needs at least 2 samples");
  if (spec.coeffs.empty()) fail(ErrorCode::kDomain, "polynomial needs at least one coefficient");
  if (spec.b != 1.0 && spec.b != -1.0) fail(ErrorCode::kDomain, "polynomial task sign b must be +1 or -1");
  if (!(spec.x_lo < spec.x_hi)) fail(ErrorCode::kDomain, "polynomial x range must be increasing");
  std::vector<double> states;
  states.reserve(steps * 2);
  for (std::size_t t = 0; t < steps; ++t) {
    const double x = spec.x_lo + (spec.x_hi - spec.x_lo) * static_cast<double>(t) / static_cast<double>(steps - 1);
    double y = 0.0;
    for (std::size_t i = spec.coeffs.size(); i-- > 0;) y = y * x + spec.coeffs[i];
    states.insert(states.end(), {x, spec.b * y});
  }
  std::vector<double> actions(steps * 2);
  for (std::size_t t = 0; t + 1 < steps; ++t) {
    actions[2 * t] = states[2 * (t + 1)] - states[2 * t];
    actions[2 * t + 1] = states[2 * (t + 1) + 1] - states[2 * t + 1];
  }
  actions[2 * (steps - 1)] = actions[2 * (steps - 2)];
  actions[2 * (steps - 1) + 1] = actions[2 * (steps - 2) + 1];
  return {Trajectory(steps, 2, 2, std::move(states), std::move(actions)),
          StyleSpec{spec.b == 1.0 ? 0U : 1U, spec.coeffs}};
}

const char* to_string(Environment env) { return env == Environment::kDriving ? "driving" : "polynomial"; }

const char* to_string(LabelMode mode) {
  switch (mode) {
    case LabelMode::kExtremes: return "extremes";
    case LabelMode::kIntermediates: return "intermediates";
    case LabelMode::kNone: return "none";
  }
  return "unknown";
}

const char* to_string(Split split) { return split == Split::kTrain ? "train" : "eval"; }

Environment environment_from_string(std::string_view name) {
  if (name == "driving") return Environment::kDriving;
  if (name == "polynomial") return Environment::kPolynomial;
  fail(ErrorCode::kConfig, fmt::format("unknown environment '{}'", name));
}

LabelMode label_mode_from_string(std::string_view name) {
  if (name == "extremes") return LabelMode::kExtremes;
  if (name == "intermediates") return LabelMode::kIntermediates;
  if (name == "none") return LabelMode::kNone;
  fail(ErrorCode::kConfig, fmt::format("unknown label mode '{}'", name));
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "eval") return Split::kEval;
  fail(ErrorCode::kConfig, fmt::format("unknown split '{}'", name));
}

void DatasetSpec::validate() const {
  if (steps < 2) fail(ErrorCode::kSpec, "steps must be at least 2");
  if (environment == Environment::kDriving) {
    if (style_dims != 1 && style_dims != 2) fail(ErrorCode::kSpec, "driving styles have 1 or 2 dimensions");
  } else {
    if (style_dims == 0 || style_dims > 10) fail(ErrorCode::kSpec, "polynomial style_dims must be in [1, 10]");
    if (poly_grid.size() != 3 || !(poly_grid[0] < poly_grid[1] && poly_grid[1] < poly_grid[2])) {
      fail(ErrorCode::kSpec, "poly_grid must hold three increasing values");
    }
    if (!(poly_x_lo < poly_x_hi)) fail(ErrorCode::kSpec, "poly_x_range must be increasing");
  }
}

DatasetSpec dataset_spec_from_json(std::string_view text) {
  using namespace jsonutil;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, fmt::format("dataset spec is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) parse_error("<root>", "expected an object");
  static const char* kKnown[] = {"environment", "split", "num_demos", "style_dims", "label_mode", "seed",
                                 "steps",       "driving", "poly_grid", "poly_x_range"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) { return it.key() == k; }) ==
        std::end(kKnown)) {
      parse_error(it.key(), "unknown field");
    }
  }
  DatasetSpec s;
  try {
    if (j.contains("environment")) s.environment = environment_from_string(get<std::string>(j, "environment", "environment"));
    if (j.contains("split")) s.split = split_from_string(get<std::string>(j, "split", "split"));
    if (j.contains("label_mode")) s.label_mode = label_mode_from_string(get<std::string>(j, "label_mode", "label_mode"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) fail(ErrorCode::kParse, e.what());
    throw;
  }
  if (s.environment == Environment::kPolynomial) {
    s.num_demos = 0;
    s.style_dims = 4;
  }
  s.num_demos = get_or<std::size_t>(j, "num_demos", s.num_demos, "num_demos");
  s.style_dims = get_or<std::size_t>(j, "style_dims", s.style_dims, "style_dims");
  s.seed = get_or<std::uint64_t>(j, "seed", s.seed, "seed");
  s.steps = get_or<std::size_t>(j, "steps", s.steps, "steps");
  if (j.contains("poly_grid")) s.poly_grid = as_doubles(j["poly_grid"], "poly_grid");
  if (j.contains("poly_x_range")) {
    const auto r = as_doubles(j["poly_x_range"], "poly_x_range");
    if (r.size() != 2) parse_error("poly_x_range", "expected [lo, hi]");
    s.poly_x_lo = r[0];
    s.poly_x_hi = r[1];
  }
  if (j.contains("driving")) {
    const auto& d = j["driving"];
    if (!d.is_object()) parse_error("driving", "expected an object");
    auto& c = s.driving;
    c.dt = get_or<double>(d, "dt", c.dt, "driving.dt");
    c.accel = get_or<double>(d, "accel", c.accel, "driving.accel");
    c.decel = get_or<double>(d, "decel", c.decel, "driving.decel");
    c.ego_start_speed = get_or<double>(d, "ego_start_speed", c.ego_start_speed, "driving.ego_start_speed");
    c.sensor_range = get_or<double>(d, "sensor_range", c.sensor_range, "driving.sensor_range");
    c.stop_x = get_or<double>(d, "stop_x", c.stop_x, "driving.stop_x");
    c.lead_start_gap = get_or<double>(d, "lead_start_gap", c.lead_start_gap, "driving.lead_start_gap");
    c.lead_speed = get_or<double>(d, "lead_speed", c.lead_speed, "driving.lead_speed");
    c.cross_start_y = get_or<double>(d, "cross_start_y", c.cross_start_y, "driving.cross_start_y");
    c.cross_speed = get_or<double>(d, "cross_speed", c.cross_speed, "driving.cross_speed");
  }
  s.validate();
  return s;
}

std::string dataset_spec_to_json(const DatasetSpec& spec) {
  nlohmann::json j;
  j["environment"] = to_string(spec.environment);
  j["split"] = to_string(spec.split);
  j["num_demos"] = spec.num_demos;
  j["style_dims"] = spec.style_dims;
  j["label_mode"] = to_string(spec.label_mode);
  j["seed"] = spec.seed;
  j["steps"] = spec.steps;
  if (spec.environment == Environment::kDriving) {
    const auto& c = spec.driving;
    j["driving"] = {{"dt", c.dt},
                    {"accel", c.accel},
                    {"decel", c.decel},
                    {"ego_start_speed", c.ego_start_speed},
                    {"sensor_range", c.sensor_range},
                    {"stop_x", c.stop_x},
                    {"lead_start_gap", c.lead_start_gap},
                    {"lead_speed", c.lead_speed},
                    {"cross_start_y", c.cross_start_y},
                    {"cross_speed", c.cross_speed}};
  } else {
    j["poly_grid"] = spec.poly_grid;
    j["poly_x_range"] = {spec.poly_x_lo, spec.poly_x_hi};
  }
  return j.dump();
}

std::vector<std::vector<double>> style_grid(const DatasetSpec& spec) {
  spec.validate();
  std::vector<std::vector<double>> grid;
  if (spec.environment == Environment::kDriving) {
    for (std::size_t i = 0; i < kSpeedLevels; ++i) {
      const double v = kVMin + (kVMax - kVMin) * static_cast<double>(i) / static_cast<double>(kSpeedLevels - 1);
      if (spec.style_dims == 1) {
        grid.push_back({v});
        continue;
      }
      for (std::size_t k = 0; k < kGapLevels; ++k) {
        const double d = kDMin + (kDMax - kDMin) * static_cast<double>(k) / static_cast<double>(kGapLevels - 1);
        grid.push_back({v, d});
      }
    }
    return grid;
  }
  const std::size_t d = spec.style_dims;
  const std::size_t total = pow_size(3, d);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<double> style(d);
    std::size_t rest = i;
    for (std::size_t k = d; k-- > 0;) {
      style[k] = spec.poly_grid[rest % 3];
      rest /= 3;
    }
    grid.push_back(std::move(style));
  }
  return grid;
}

LabeledDataset build_dataset(const DatasetSpec& spec) {
  spec.validate();
  if (spec.split == Split::kEval) {
    std::vector<Trajectory> trajectories;
    std::vector<StyleSpec> specs;
    for (const auto& style : style_grid(spec)) {
      for (std::size_t task = 0; task < 2; ++task) {
        auto [traj, s] = render(spec, task, style);
        trajectories.push_back(std::move(traj));
        specs.push_back(std::move(s));
      }
    }
    return LabeledDataset(std::move(trajectories), std::move(specs), {}, 2, make_meta(spec));
  }
  return build_training(spec, default_demos(spec), plan_training(spec));
}

std::vector<LabeledDataset> sweep_datasets(const DatasetSpec& base, const std::vector<std::size_t>& sizes) {
  base.validate();
  if (base.split != Split::kTrain) fail(ErrorCode::kSpec, "sweeps are built from training specs");
  const TrainingPlan plan = plan_training(base);
  std::vector<LabeledDataset> out;
  for (auto n : sizes) out.push_back(build_training(base, n, plan));
  return out;
}

DrivingSummary summarize_driving(const Trajectory& trajectory, double dt) {
  if (trajectory.state_dim() != 4 || trajectory.action_dim() != 2) {
    fail(ErrorCode::kShape, "driving summaries need 4-wide states and 2-wide actions");
  }
  if (!(dt > 0.0)) fail(ErrorCode::kDomain, "dt must be positive");
  DrivingSummary s;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
  for (std::size_t t = 0; t < trajectory.steps(); ++t) {
    const auto a = trajectory.action(t);
    max_step = std::max(max_step, std::hypot(a[0], a[1]));
    const auto st = trajectory.state(t);
    min_gap = std::min(min_gap, std::hypot(st[2] - st[0], st[3] - st[1]));
  }
  s.max_speed_kmh = max_step / dt * 3.6;
  s.min_gap_ft = min_gap / kFeetToMeters;
  return s;
}

}  // namespace pecan
