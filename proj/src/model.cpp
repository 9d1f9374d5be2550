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
#include "pecan/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "pecan/error.hpp"
#include "pecan/json_util.hpp"

namespace pecan {

namespace {

constexpr std::size_t kDepth = 4;

// Random streams derived from a model seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

nn::Mlp make_mlp(std::size_t in, std::size_t hidden, std::size_t out, nn::Activation last, Rng& rng) {
  const std::size_t dims[] = {in, hidden, hidden, hidden, out};
  const nn::Activation acts[] = {nn::Activation::kRelu, nn::Activation::kRelu, nn::Activation::kRelu, last};
  return nn::Mlp::random(dims, acts, rng);
}

void store(std::map<std::string, Tensor>& params, const std::string& name, const nn::DenseLayer& layer) {
  Tensor w;
  w.shape = {static_cast<std::size_t>(layer.weight.rows()), static_cast<std::size_t>(layer.weight.cols())};
  w.data.reserve(static_cast<std::size_t>(layer.weight.size()));
  for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) w.data.push_back(layer.weight(r, c));
  }
  Tensor b;
  b.shape = {static_cast<std::size_t>(layer.bias.size())};
  b.data.assign(layer.bias.data(), layer.bias.data() + layer.bias.size());
  params[name + ".weight"] = std::move(w);
  params[name + ".bias"] = std::move(b);
}

nn::DenseLayer load(const std::map<std::string, Tensor>& params, const std::string& name, nn::Activation act) {
  const Tensor& w = params.at(name + ".weight");
  const Tensor& b = params.at(name + ".bias");
  nn::DenseLayer layer;
  layer.activation = act;
  layer.weight.resize(static_cast<Eigen::Index>(w.shape[0]), static_cast<Eigen::Index>(w.shape[1]));
  for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
      layer.weight(r, c) = w.data[static_cast<std::size_t>(r * layer.weight.cols() + c)];
    }
  }
  layer.bias = Eigen::Map<const nn::Vector>(b.data.data(), static_cast<Eigen::Index>(b.data.size()));
  return layer;
}

nn::Mlp load_mlp(const std::map<std::string, Tensor>& params, const std::string& prefix, nn::Activation last) {
  std::vector<nn::DenseLayer> layers;
  for (std::size_t l = 0; l < kDepth; ++l) {
    layers.push_back(load(params, fmt::format("{}.{}", prefix, l), l + 1 == kDepth ? last : nn::Activation::kRelu));
  }
  return nn::Mlp(std::move(layers));
}

std::size_t row_argmax(const nn::Matrix& m, Eigen::Index r) {
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < m.cols(); ++c) {
    if (m(r, c) > m(r, best)) best = c;
  }
  return static_cast<std::size_t>(best);
}

bool uses_labels(const PecanModel& model, const TrainingData& data, const TrainConfig& cfg) {
  return cfg.ablation_mode != AblationMode::kNoLabels && model.num_classes() > 0 && !data.labels.empty();
}

void zero(nn::MlpGradient& g) {
  for (auto& l : g.layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

}  // namespace

const char* to_string(AblationMode mode) {
  switch (mode) {
    case AblationMode::kPecan: return "pecan";
    case AblationMode::kNoLabels: return "no_labels";
    case AblationMode::kIntermediateLabels: return "intermediate_labels";
  }
  return "unknown";
}

AblationMode ablation_mode_from_string(std::string_view name) {
  if (name == "pecan") return AblationMode::kPecan;
  if (name == "no_labels") return AblationMode::kNoLabels;
  if (name == "intermediate_labels") return AblationMode::kIntermediateLabels;
  fail(ErrorCode::kConfig, fmt::format("unknown ablation mode '{}'", name));
}

void ModelConfig::validate() const {
  if (d_theta == 0) fail(ErrorCode::kConfig, "d_theta must be positive");
  if (hidden_width == 0) fail(ErrorCode::kConfig, "hidden_width must be positive");
  if (downsample_steps < 2) fail(ErrorCode::kConfig, "downsample_steps must be at least 2");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) fail(ErrorCode::kConfig, "temperature must be positive");
}

void TrainConfig::validate() const {
  if (epochs == 0) fail(ErrorCode::kConfig, "epochs must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail(ErrorCode::kConfig, "learning_rate must be positive");
  if (!(lambda_traj >= 0.0) || !(lambda_ce >= 0.0) || !std::isfinite(lambda_traj) || !std::isfinite(lambda_ce)) {
    fail(ErrorCode::kConfig, "loss weights must be finite and non-negative");
  }
}

RunConfig run_config_from_json(std::string_view text) {
  using namespace jsonutil;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) parse_error("config", "expected an object");
  static const char* const kKnown[] = {"d_theta",       "hidden_width", "downsample_steps", "temperature", "epochs",
                                       "learning_rate", "lambda_traj",  "lambda_ce",        "seed",        "ablation_mode"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) parse_error(key, "unknown field");
  }
  RunConfig c;
  auto& m = c.model;
  auto& t = c.train;
  m.d_theta = get_or<std::size_t>(j, "d_theta", m.d_theta, "d_theta");
  m.hidden_width = get_or<std::size_t>(j, "hidden_width", m.hidden_width, "hidden_width");
  m.downsample_steps = get_or<std::size_t>(j, "downsample_steps", m.downsample_steps, "downsample_steps");
  m.temperature = get_or<double>(j, "temperature", m.temperature, "temperature");
  t.epochs = get_or<std::size_t>(j, "epochs", t.epochs, "epochs");
  t.learning_rate = get_or<double>(j, "learning_rate", t.learning_rate, "learning_rate");
  t.lambda_traj = get_or<double>(j, "lambda_traj", t.lambda_traj, "lambda_traj");
  t.lambda_ce = get_or<double>(j, "lambda_ce", t.lambda_ce, "lambda_ce");
  t.seed = get_or<std::uint64_t>(j, "seed", t.seed, "seed");
  t.ablation_mode = ablation_mode_from_string(get_or<std::string>(j, "ablation_mode", "pecan", "ablation_mode"));
  m.validate();
  t.validate();
  return c;
}

std::string run_config_to_json(const RunConfig& c) {
  const nlohmann::json j = {{"d_theta", c.model.d_theta},
                            {"hidden_width", c.model.hidden_width},
                            {"downsample_steps", c.model.downsample_steps},
                            {"temperature", c.model.temperature},
                            {"epochs", c.train.epochs},
                            {"learning_rate", c.train.learning_rate},
                            {"lambda_traj", c.train.lambda_traj},
                            {"lambda_ce", c.train.lambda_ce},
                            {"seed", c.train.seed},
                            {"ablation_mode", to_string(c.train.ablation_mode)}};
  return j.dump() + "\n";
}

PecanModel PecanModel::initialize(const TrainingData& data, const ModelConfig& cfg, std::size_t num_classes,
                                  std::uint64_t seed) {
  cfg.validate();
  if (data.trajectories.empty()) fail(ErrorCode::kValidation, "cannot initialize a model from zero trajectories");
  if (data.num_tasks == 0) fail(ErrorCode::kValidation, "num_tasks must be positive");
  const Trajectory& first = data.trajectories.front();
  PecanModel m;
  m.d_tau_ = data.num_tasks;
  m.d_theta_ = cfg.d_theta;
  m.num_classes_ = num_classes;
  m.hidden_width_ = cfg.hidden_width;
  m.temperature_ = cfg.temperature;
  m.seed_ = seed;
  m.shape_ = {cfg.downsample_steps, first.state_dim(), first.action_dim()};

  std::vector<std::vector<double>> rows;
  rows.reserve(data.trajectories.size());
  for (const auto& t : data.trajectories) {
    if (t.state_dim() != m.shape_.state_dim || t.action_dim() != m.shape_.action_dim) {
      fail(ErrorCode::kShape, "trajectories disagree on state or action width");
    }
    rows.push_back(t.downsample(cfg.downsample_steps).flatten());
  }
  m.norm_ = Normalization::fit(rows);

  const std::size_t io = m.shape_.flat_size();
  const std::size_t h = cfg.hidden_width;
  Rng rng = derive_rng(seed, kInitStream);
  m.task_encoder_ = make_mlp(io, h, m.d_tau_, nn::Activation::kLinear, rng);
  m.style_encoder_ = make_mlp(io, h, m.d_theta_, nn::Activation::kTanh, rng);
  m.decoder_ = make_mlp(m.d_tau_ + m.d_theta_, h, io, nn::Activation::kTanh, rng);
  if (num_classes > 0) {
    const std::size_t dims[] = {m.d_theta_, num_classes};
    const nn::Activation acts[] = {nn::Activation::kLinear};
    m.classifier_ = nn::Mlp::random(dims, acts, rng);
  }
  return m;
}

PecanModel PecanModel::from_checkpoint(const Checkpoint& ck) {
  ck.validate();
  PecanModel m;
  m.d_tau_ = ck.d_tau;
  m.d_theta_ = ck.d_theta;
  m.num_classes_ = ck.num_classes;
  m.hidden_width_ = ck.hidden_width;
  m.temperature_ = ck.temperature;
  m.seed_ = ck.seed;
  m.shape_ = ck.traj_shape;
  m.norm_ = ck.norm;
  m.meta_ = ck.meta;
  m.task_encoder_ = load_mlp(ck.params, "task_encoder", nn::Activation::kLinear);
  m.style_encoder_ = load_mlp(ck.params, "style_encoder", nn::Activation::kTanh);
  m.decoder_ = load_mlp(ck.params, "decoder", nn::Activation::kTanh);
  if (ck.num_classes > 0) {
    std::vector<nn::DenseLayer> layers{load(ck.params, "classifier", nn::Activation::kLinear)};
    m.classifier_ = nn::Mlp(std::move(layers));
  }
  return m;
}

Checkpoint PecanModel::to_checkpoint() const {
  Checkpoint ck;
  ck.d_tau = d_tau_;
  ck.d_theta = d_theta_;
  ck.num_classes = num_classes_;
  ck.hidden_width = hidden_width_;
  ck.temperature = temperature_;
  ck.traj_shape = shape_;
  ck.norm = norm_;
  ck.seed = seed_;
  ck.meta = meta_;
  auto put = [&](const std::string& prefix, const nn::Mlp& net) {
    for (std::size_t l = 0; l < net.num_layers(); ++l) store(ck.params, fmt::format("{}.{}", prefix, l), net.layers()[l]);
  };
  put("task_encoder", task_encoder_);
  put("style_encoder", style_encoder_);
  put("decoder", decoder_);
  if (num_classes_ > 0) store(ck.params, "classifier", classifier_.layers().front());
  return ck;
}

std::vector<double> PecanModel::model_input(const Trajectory& trajectory) const {
  if (trajectory.state_dim() != shape_.state_dim || trajectory.action_dim() != shape_.action_dim) {
    fail(ErrorCode::kShape, fmt::format("trajectory has state/action width {}/{}, model expects {}/{}",
                                        trajectory.state_dim(), trajectory.action_dim(), shape_.state_dim,
                                        shape_.action_dim));
  }
  return norm_.apply(trajectory.downsample(shape_.steps).flatten());
}

nn::Matrix PecanModel::model_inputs(std::span<const Trajectory> trajectories) const {
  nn::Matrix x(static_cast<Eigen::Index>(trajectories.size()), static_cast<Eigen::Index>(shape_.flat_size()));
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto row = model_input(trajectories[i]);
    for (std::size_t j = 0; j < row.size(); ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
  }
  return x;
}

std::vector<double> PecanModel::encode_task(const Trajectory& trajectory) const {
  const auto enc = encode_all(std::span<const Trajectory>(&trajectory, 1));
  std::vector<double> out(d_tau_, 0.0);
  out[enc.task.front()] = 1.0;
  return out;
}

std::vector<double> PecanModel::encode_style(const Trajectory& trajectory) const {
  const auto x = model_inputs(std::span<const Trajectory>(&trajectory, 1));
  const nn::Matrix z = style_encoder_.forward(x);
  return {z.data(), z.data() + z.size()};
}

PecanModel::Encoding PecanModel::encode_all(std::span<const Trajectory> trajectories) const {
  const nn::Matrix x = model_inputs(trajectories);
  const nn::Matrix logits = task_encoder_.forward(x);
  Encoding enc;
  enc.task.reserve(trajectories.size());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) enc.task.push_back(row_argmax(logits, r));
  enc.style = style_encoder_.forward(x);
  return enc;
}

nn::Matrix PecanModel::decode_normalized(const nn::Matrix& codes) const { return decoder_.forward(codes); }

Trajectory PecanModel::decode(std::span<const double> z_tau, std::span<const double> z_theta) const {
  if (z_tau.size() != d_tau_) fail(ErrorCode::kShape, fmt::format("z_tau has length {}, expected {}", z_tau.size(), d_tau_));
  if (z_theta.size() != d_theta_) {
    fail(ErrorCode::kShape, fmt::format("z_theta has length {}, expected {}", z_theta.size(), d_theta_));
  }
  std::size_t ones = 0;
  for (std::size_t i = 0; i < z_tau.size(); ++i) {
    if (z_tau[i] == 1.0) {
      ++ones;
    } else if (z_tau[i] != 0.0) {
      fail(ErrorCode::kDomain, fmt::format("z_tau[{}] = {} is not 0 or 1", i, z_tau[i]));
    }
  }
  if (ones != 1) fail(ErrorCode::kDomain, "z_tau must contain exactly one 1");
  for (std::size_t i = 0; i < z_theta.size(); ++i) {
    if (!(z_theta[i] >= -1.0 && z_theta[i] <= 1.0)) {
      fail(ErrorCode::kDomain, fmt::format("z_theta[{}] = {} lies outside [-1, 1]", i, z_theta[i]));
    }
  }
  nn::Matrix code(1, static_cast<Eigen::Index>(d_tau_ + d_theta_));
  for (std::size_t i = 0; i < d_tau_; ++i) code(0, static_cast<Eigen::Index>(i)) = z_tau[i];
  for (std::size_t i = 0; i < d_theta_; ++i) code(0, static_cast<Eigen::Index>(d_tau_ + i)) = z_theta[i];
  const nn::Matrix y = decoder_.forward(code);
  const auto raw = norm_.invert(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
  return Trajectory::unflatten(raw, shape_.steps, shape_.state_dim, shape_.action_dim);
}

LossTerms compute_losses(const PecanModel& model, const TrainingData& data, const TrainConfig& cfg) {
  if (data.trajectories.empty()) return {};
  return forward_backward(model, prepare_batch(model, data, cfg), cfg, nullptr, nullptr);
}

TrainingBatch prepare_batch(const PecanModel& model, const TrainingData& data, const TrainConfig& cfg) {
  TrainingBatch batch;
  batch.x = model.model_inputs(data.trajectories);
  batch.with_labels = uses_labels(model, data, cfg);
  if (!batch.with_labels) return batch;
  if (data.labels.size() != model.num_classes()) {
    fail(ErrorCode::kShape, fmt::format("model classifier has {} classes but the data has {} label groups",
                                        model.num_classes(), data.labels.size()));
  }
  for (const auto& group : data.labels) {
    if (group.class_index >= model.num_classes()) {
      fail(ErrorCode::kValidation, fmt::format("class index {} out of range", group.class_index));
    }
    for (auto id : group.member_ids) {
      if (id >= data.trajectories.size()) fail(ErrorCode::kValidation, fmt::format("label member {} out of range", id));
      batch.labeled_rows.push_back(static_cast<Eigen::Index>(id));
      batch.labeled_targets.push_back(group.class_index);
    }
  }
  return batch;
}

ModelGradients zero_gradients(const PecanModel& model, const TrainingBatch& batch) {
  ModelGradients g;
  g.task_encoder = model.task_encoder().zero_gradient();
  g.style_encoder = model.style_encoder().zero_gradient();
  g.decoder = model.decoder().zero_gradient();
  if (batch.with_labels) g.classifier = model.classifier().zero_gradient();
  return g;
}

LossTerms forward_backward(const PecanModel& model, const TrainingBatch& batch, const TrainConfig& cfg,
                           const nn::Matrix* gumbel_noise, ModelGradients* grads) {
  const nn::Matrix& x = batch.x;
  const auto d_tau = static_cast<Eigen::Index>(model.d_tau());
  const auto d_theta = static_cast<Eigen::Index>(model.d_theta());
  nn::Tape t_task;
  nn::Tape t_style;
  nn::Tape t_dec;
  nn::Tape t_cls;
  const bool backward = grads != nullptr;

  const nn::Matrix logits = model.task_encoder().forward(x, backward ? &t_task : nullptr);
  const nn::GumbelBatch gs = nn::gumbel_st(logits, model.temperature(), gumbel_noise);
  const nn::Matrix z = model.style_encoder().forward(x, backward ? &t_style : nullptr);
  nn::Matrix codes(x.rows(), d_tau + d_theta);
  codes << gs.hard, z;
  const nn::Matrix diff = model.decoder().forward(codes, backward ? &t_dec : nullptr) - x;

  LossTerms terms;
  terms.trajectory = diff.squaredNorm();

  nn::Matrix zl;
  nn::Matrix dlogits_cls;
  if (batch.with_labels && !batch.labeled_rows.empty()) {
    zl.resize(static_cast<Eigen::Index>(batch.labeled_rows.size()), d_theta);
    for (std::size_t i = 0; i < batch.labeled_rows.size(); ++i) zl.row(static_cast<Eigen::Index>(i)) = z.row(batch.labeled_rows[i]);
    const nn::Matrix cls = model.classifier().forward(zl, backward ? &t_cls : nullptr);
    dlogits_cls.resize(cls.rows(), cls.cols());
    std::vector<double> row(static_cast<std::size_t>(cls.cols()));
    for (Eigen::Index r = 0; r < cls.rows(); ++r) {
      for (Eigen::Index c = 0; c < cls.cols(); ++c) row[static_cast<std::size_t>(c)] = cls(r, c);
      const auto ce = nn::softmax_ce(row, batch.labeled_targets[static_cast<std::size_t>(r)]);
      terms.cross_entropy += ce.loss;
      for (Eigen::Index c = 0; c < cls.cols(); ++c) dlogits_cls(r, c) = cfg.lambda_ce * ce.dlogits[static_cast<std::size_t>(c)];
    }
  }
  terms.total = cfg.lambda_traj * terms.trajectory + cfg.lambda_ce * terms.cross_entropy;
  if (!backward) return terms;

  const nn::Matrix dcodes = model.decoder().backward(t_dec, (2.0 * cfg.lambda_traj) * diff, grads->decoder);
  nn::Matrix dz = dcodes.rightCols(d_theta);
  if (dlogits_cls.size() > 0) {
    const nn::Matrix dzl = model.classifier().backward(t_cls, dlogits_cls, grads->classifier);
    for (std::size_t i = 0; i < batch.labeled_rows.size(); ++i) dz.row(batch.labeled_rows[i]) += dzl.row(static_cast<Eigen::Index>(i));
  }
  model.style_encoder().backward(t_style, dz, grads->style_encoder);
  const nn::Matrix dlogits = nn::gumbel_st_backward(gs.soft, dcodes.leftCols(d_tau), model.temperature());
  model.task_encoder().backward(t_task, dlogits, grads->task_encoder);
  return terms;
}

TrainResult train(PecanModel model, const TrainingData& data, const TrainConfig& cfg) {
  // Zero epochs is accepted here as the identity; configs reject it.
  TrainConfig checked = cfg;
  checked.epochs = std::max<std::size_t>(checked.epochs, 1);
  checked.validate();
  TrainResult result;
  if (data.trajectories.empty()) fail(ErrorCode::kValidation, "cannot train on zero trajectories");
  if (data.num_tasks != model.d_tau()) {
    fail(ErrorCode::kShape, fmt::format("data has {} tasks, model has d_tau={}", data.num_tasks, model.d_tau()));
  }
  if (cfg.epochs == 0) {
    result.model = std::move(model);
    return result;
  }
  const TrainingBatch batch = prepare_batch(model, data, cfg);
  ModelGradients g = zero_gradients(model, batch);
  std::vector<nn::ParamBlock> blocks;
  nn::append_blocks(model.task_encoder(), g.task_encoder, blocks);
  nn::append_blocks(model.style_encoder(), g.style_encoder, blocks);
  nn::append_blocks(model.decoder(), g.decoder, blocks);
  if (batch.with_labels) nn::append_blocks(model.classifier(), g.classifier, blocks);

  nn::AdamState adam(nn::AdamConfig{cfg.learning_rate, 0.9, 0.999, 1e-8});
  Rng noise_rng = derive_rng(cfg.seed, kNoiseStream);
  result.history.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    zero(g.task_encoder);
    zero(g.style_encoder);
    zero(g.decoder);
    zero(g.classifier);
    const nn::Matrix noise = nn::sample_gumbel(batch.x.rows(), static_cast<Eigen::Index>(model.d_tau()), noise_rng);
    const LossTerms terms = forward_backward(model, batch, cfg, &noise, &g);
    if (!std::isfinite(terms.total)) {
      fail(ErrorCode::kNumeric, fmt::format("loss became non-finite at epoch {}: trajectory={}, cross_entropy={}, total={}",
                                            epoch, terms.trajectory, terms.cross_entropy, terms.total));
    }
    result.history.push_back(terms);
    adam.step(blocks);
    if (epoch % 1000 == 0 || epoch + 1 == cfg.epochs) {
      spdlog::debug("epoch {}: trajectory={:.6g} cross_entropy={:.6g} total={:.6g}", epoch, terms.trajectory,
                    terms.cross_entropy, terms.total);
    }
  }
  result.model = std::move(model);
  return result;
}

TrainResult train_on(const LabeledDataset& dataset, const ModelConfig& model_cfg, const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t m = cfg.ablation_mode == AblationMode::kNoLabels ? 0 : dataset.num_classes();
  PecanModel model = PecanModel::initialize(dataset.training_view(), model_cfg, m, cfg.seed);
  TrainResult result = train(std::move(model), dataset.training_view(), cfg);
  annotate_corners(result.model, dataset);
  return result;
}

void annotate_corners(PecanModel& model, const LabeledDataset& dataset) {
  auto& meta = model.meta();
  meta.environment = dataset.meta().environment;
  meta.task_names = dataset.meta().task_names;
  meta.dt = dataset.meta().dt;
  meta.corners.clear();
  if (dataset.labels().empty()) return;
  const auto enc = model.encode_all(dataset.trajectories());
  for (const auto& group : dataset.labels()) {
    CornerAnnotation c;
    c.class_index = group.class_index;
    c.z.assign(model.d_theta(), 0.0);
    for (auto id : group.member_ids) {
      for (std::size_t k = 0; k < model.d_theta(); ++k) {
        c.z[k] += enc.style(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(k));
      }
    }
    for (auto& v : c.z) v /= static_cast<double>(group.member_ids.size());
    if (dataset.specs()) {
      const auto& specs = *dataset.specs();
      c.style.assign(specs[group.member_ids.front()].style.size(), 0.0);
      for (auto id : group.member_ids) {
        for (std::size_t k = 0; k < c.style.size(); ++k) c.style[k] += specs[id].style[k];
      }
      for (auto& v : c.style) v /= static_cast<double>(group.member_ids.size());
    }
    meta.corners.push_back(std::move(c));
  }
}

}  // namespace pecan
