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
#include "pecan/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "pecan/error.hpp"
#include "pecan/json_util.hpp"

namespace pecan {

using nlohmann::json;

namespace {

json rows_to_json(const std::vector<double>& flat, std::size_t steps, std::size_t dim) {
  json rows = json::array();
  for (std::size_t t = 0; t < steps; ++t) {
    rows.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(t * dim),
                                       flat.begin() + static_cast<std::ptrdiff_t>((t + 1) * dim)));
  }
  return rows;
}

// Returns the flattened rows and their common width.
std::pair<std::vector<double>, std::size_t> rows_from_json(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) jsonutil::parse_error(where, "expected a non-empty array of rows");
  std::vector<double> flat;
  std::size_t width = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    auto row = jsonutil::as_doubles(rows[t], fmt::format("{}[{}]", where, t));
    if (t == 0) width = row.size();
    if (row.size() != width) jsonutil::parse_error(fmt::format("{}[{}]", where, t), "row width differs from row 0");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return {std::move(flat), width};
}

void check_version(const json& doc, const char* kind) {
  const auto version = jsonutil::get<int>(doc, "version", "version");
  if (version != kFormatVersion) {
    fail(ErrorCode::kVersion,
         fmt::format("{} format version {} is incompatible with supported version {}", kind, version, kFormatVersion));
  }
}

json parse_document(std::string_view text, const char* kind) {
  try {
    json doc = json::parse(text.begin(), text.end());
    if (!doc.is_object()) fail(ErrorCode::kParse, fmt::format("{} document must be a JSON object", kind));
    return doc;
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParse, fmt::format("{} is not valid JSON: {}", kind, e.what()));
  }
}

}  // namespace

std::string dataset_to_json(const LabeledDataset& dataset) {
  json doc;
  doc["version"] = kFormatVersion;
  doc["num_tasks"] = dataset.num_tasks();
  json trajectories = json::array();
  for (const auto& traj : dataset.trajectories()) {
    trajectories.push_back({{"states", rows_to_json(traj.states(), traj.steps(), traj.state_dim())},
                            {"actions", rows_to_json(traj.actions(), traj.steps(), traj.action_dim())}});
  }
  doc["trajectories"] = std::move(trajectories);
  if (dataset.specs()) {
    json specs = json::array();
    for (const auto& s : *dataset.specs()) specs.push_back({{"task_id", s.task_id}, {"style", s.style}});
    doc["specs"] = std::move(specs);
  } else {
    doc["specs"] = nullptr;
  }
  json labels = json::array();
  for (const auto& g : dataset.labels()) labels.push_back({{"class_index", g.class_index}, {"members", g.member_ids}});
  doc["labels"] = std::move(labels);
  if (!dataset.meta().empty()) {
    const auto& m = dataset.meta();
    doc["meta"] = {{"environment", m.environment}, {"task_names", m.task_names}, {"style_names", m.style_names}, {"dt", m.dt}};
  }
  return doc.dump() + "\n";
}

LabeledDataset dataset_from_json(std::string_view text) {
  const json doc = parse_document(text, "dataset");
  check_version(doc, "dataset");
  const auto num_tasks = jsonutil::get<std::size_t>(doc, "num_tasks", "num_tasks");

  const json& jtraj = jsonutil::field(doc, "trajectories", "trajectories");
  if (!jtraj.is_array()) jsonutil::parse_error("trajectories", "expected an array");
  std::vector<Trajectory> trajectories;
  trajectories.reserve(jtraj.size());
  for (std::size_t i = 0; i < jtraj.size(); ++i) {
    const std::string where = fmt::format("trajectories[{}]", i);
    auto [states, state_dim] = rows_from_json(jsonutil::field(jtraj[i], "states", where + ".states"), where + ".states");
    const json& jact = jsonutil::field(jtraj[i], "actions", where + ".actions");
    auto [actions, action_dim] = rows_from_json(jact, where + ".actions");
    const std::size_t steps = jsonutil::field(jtraj[i], "states", where).size();
    if (jact.size() != steps) {
      fail(ErrorCode::kValidation, fmt::format("{}: {} states but {} actions", where, steps, jact.size()));
    }
    trajectories.emplace_back(steps, state_dim, action_dim, std::move(states), std::move(actions));
  }

  std::optional<std::vector<StyleSpec>> specs;
  const json& jspecs = jsonutil::field(doc, "specs", "specs");
  if (!jspecs.is_null()) {
    if (!jspecs.is_array()) jsonutil::parse_error("specs", "expected an array or null");
    specs.emplace();
    for (std::size_t i = 0; i < jspecs.size(); ++i) {
      const std::string where = fmt::format("specs[{}]", i);
      StyleSpec s;
      s.task_id = jsonutil::get<std::size_t>(jspecs[i], "task_id", where + ".task_id");
      s.style = jsonutil::as_doubles(jsonutil::field(jspecs[i], "style", where + ".style"), where + ".style");
      specs->push_back(std::move(s));
    }
  }

  std::vector<StyleLabelGroup> labels;
  const json& jlabels = jsonutil::field(doc, "labels", "labels");
  if (!jlabels.is_array()) jsonutil::parse_error("labels", "expected an array");
  for (std::size_t g = 0; g < jlabels.size(); ++g) {
    const std::string where = fmt::format("labels[{}]", g);
    StyleLabelGroup group;
    group.class_index = jsonutil::get<std::size_t>(jlabels[g], "class_index", where + ".class_index");
    group.member_ids = jsonutil::get<std::vector<std::size_t>>(jlabels[g], "members", where + ".members");
    labels.push_back(std::move(group));
  }

  DatasetMeta meta;
  if (doc.contains("meta") && !doc["meta"].is_null()) {
    const json& jm = doc["meta"];
    meta.environment = jsonutil::get_or<std::string>(jm, "environment", "", "meta.environment");
    meta.task_names = jsonutil::get_or<std::vector<std::string>>(jm, "task_names", {}, "meta.task_names");
    meta.style_names = jsonutil::get_or<std::vector<std::string>>(jm, "style_names", {}, "meta.style_names");
    meta.dt = jsonutil::get_or<double>(jm, "dt", 0.0, "meta.dt");
  }
  return LabeledDataset(std::move(trajectories), std::move(specs), std::move(labels), num_tasks, std::move(meta));
}

LabeledDataset load_dataset(const std::filesystem::path& path) { return dataset_from_json(read_text_file(path)); }

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path) {
  write_text_file_atomic(path, dataset_to_json(dataset));
}

std::string checkpoint_to_json(const Checkpoint& ck) {
  json doc;
  doc["version"] = ck.version;
  doc["d_tau"] = ck.d_tau;
  doc["d_theta"] = ck.d_theta;
  doc["num_classes"] = ck.num_classes;
  doc["hidden_width"] = ck.hidden_width;
  doc["temperature"] = ck.temperature;
  doc["traj_shape"] = {{"steps", ck.traj_shape.steps},
                       {"state_dim", ck.traj_shape.state_dim},
                       {"action_dim", ck.traj_shape.action_dim}};
  doc["norm"] = {{"lower", ck.norm.lower}, {"upper", ck.norm.upper}};
  json params = json::object();
  for (const auto& [name, tensor] : ck.params) params[name] = {{"shape", tensor.shape}, {"data", tensor.data}};
  doc["params"] = std::move(params);
  doc["seed"] = ck.seed;
  json corners = json::array();
  for (const auto& c : ck.meta.corners) corners.push_back({{"class_index", c.class_index}, {"z", c.z}, {"style", c.style}});
  doc["meta"] = {{"environment", ck.meta.environment},
                 {"task_names", ck.meta.task_names},
                 {"dt", ck.meta.dt},
                 {"corners", std::move(corners)}};
  return doc.dump() + "\n";
}

Checkpoint checkpoint_from_json(std::string_view text) {
  const json doc = parse_document(text, "checkpoint");
  check_version(doc, "checkpoint");
  Checkpoint ck;
  ck.version = kFormatVersion;
  ck.d_tau = jsonutil::get<std::size_t>(doc, "d_tau", "d_tau");
  ck.d_theta = jsonutil::get<std::size_t>(doc, "d_theta", "d_theta");
  ck.num_classes = jsonutil::get<std::size_t>(doc, "num_classes", "num_classes");
  ck.hidden_width = jsonutil::get<std::size_t>(doc, "hidden_width", "hidden_width");
  ck.temperature = jsonutil::get<double>(doc, "temperature", "temperature");
  const json& shape = jsonutil::field(doc, "traj_shape", "traj_shape");
  ck.traj_shape.steps = jsonutil::get<std::size_t>(shape, "steps", "traj_shape.steps");
  ck.traj_shape.state_dim = jsonutil::get<std::size_t>(shape, "state_dim", "traj_shape.state_dim");
  ck.traj_shape.action_dim = jsonutil::get<std::size_t>(shape, "action_dim", "traj_shape.action_dim");
  const json& norm = jsonutil::field(doc, "norm", "norm");
  ck.norm.lower = jsonutil::as_doubles(jsonutil::field(norm, "lower", "norm.lower"), "norm.lower");
  ck.norm.upper = jsonutil::as_doubles(jsonutil::field(norm, "upper", "norm.upper"), "norm.upper");
  const json& params = jsonutil::field(doc, "params", "params");
  if (!params.is_object()) jsonutil::parse_error("params", "expected an object");
  for (const auto& [name, jt] : params.items()) {
    const std::string where = "params." + name;
    Tensor t;
    t.shape = jsonutil::get<std::vector<std::size_t>>(jt, "shape", where + ".shape");
    t.data = jsonutil::as_doubles(jsonutil::field(jt, "data", where + ".data"), where + ".data");
    ck.params.emplace(name, std::move(t));
  }
  ck.seed = jsonutil::get<std::uint64_t>(doc, "seed", "seed");
  if (doc.contains("meta") && !doc["meta"].is_null()) {
    const json& jm = doc["meta"];
    ck.meta.environment = jsonutil::get_or<std::string>(jm, "environment", "", "meta.environment");
    ck.meta.task_names = jsonutil::get_or<std::vector<std::string>>(jm, "task_names", {}, "meta.task_names");
    ck.meta.dt = jsonutil::get_or<double>(jm, "dt", 0.0, "meta.dt");
    if (jm.contains("corners")) {
      const json& jc = jm["corners"];
      if (!jc.is_array()) jsonutil::parse_error("meta.corners", "expected an array");
      for (std::size_t i = 0; i < jc.size(); ++i) {
        const std::string where = fmt::format("meta.corners[{}]", i);
        CornerAnnotation c;
        c.class_index = jsonutil::get<std::size_t>(jc[i], "class_index", where + ".class_index");
        c.z = jsonutil::as_doubles(jsonutil::field(jc[i], "z", where + ".z"), where + ".z");
        c.style = jsonutil::as_doubles(jsonutil::field(jc[i], "style", where + ".style"), where + ".style");
        ck.meta.corners.push_back(std::move(c));
      }
    }
  }
  ck.validate();
  return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return checkpoint_from_json(read_text_file(path)); }

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  checkpoint.validate();
  write_text_file_atomic(path, checkpoint_to_json(checkpoint));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, fmt::format("cannot write '{}'", tmp.string()));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(ErrorCode::kIo, fmt::format("short write to '{}'", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIo, fmt::format("cannot move '{}' into place: {}", tmp.string(), ec.message()));
}

}  // namespace pecan
