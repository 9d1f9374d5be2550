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
#include "pecan/pecan.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <thread>

#include "json.hpp"
#include "pecan/envgen.hpp"
#include "pecan/error.hpp"
#include "pecan/experiment.hpp"
#include "pecan/io.hpp"
#include "pecan/log.hpp"
#include "pecan/metrics.hpp"
#include "pecan/model.hpp"
#include "pecan/service.hpp"
#include "pecan/theory.hpp"

struct pecan_dataset {
  pecan::LabeledDataset value;
};

struct pecan_model {
  pecan::PecanModel value;
};

struct pecan_service {
  explicit pecan_service(pecan::PecanModel m) : value(std::move(m)) {}
  pecan::Service value;
};

struct pecan_server {
  explicit pecan_server(pecan::Service& s) : http(s) {}
  pecan::HttpServer http;
  std::thread thread;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

pecan_status status_of(pecan::ErrorCode code) {
  using pecan::ErrorCode;
  switch (code) {
    case ErrorCode::kIo: return PECAN_ERR_IO;
    case ErrorCode::kParse: return PECAN_ERR_PARSE;
    case ErrorCode::kValidation: return PECAN_ERR_VALIDATION;
    case ErrorCode::kShape: return PECAN_ERR_SHAPE;
    case ErrorCode::kVersion: return PECAN_ERR_VERSION;
    case ErrorCode::kNumeric: return PECAN_ERR_NUMERIC;
    case ErrorCode::kDomain: return PECAN_ERR_DOMAIN;
    case ErrorCode::kConfig: return PECAN_ERR_CONFIG;
    case ErrorCode::kSpec: return PECAN_ERR_SPEC;
    case ErrorCode::kDegenerate: return PECAN_ERR_DEGENERATE;
  }
  return PECAN_ERR_INTERNAL;
}

pecan_status set_error(pecan_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into a status and the thread's last error.
template <typename F>
pecan_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return PECAN_OK;
  } catch (const pecan::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(PECAN_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PECAN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PECAN_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(PECAN_ERR_INTERNAL, "unknown failure");
  }
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

#define PECAN_REQUIRE(p)                                                     \
  do {                                                                       \
    if ((p) == nullptr) return set_error(PECAN_ERR_ARGUMENT, #p " is NULL"); \
  } while (0)

json report_json(const pecan::ExperimentReport& report) {
  json summaries = json::array();
  for (const auto& s : report.summaries) {
    json metrics = json::object();
    for (const auto& [name, m] : s.metrics) metrics[name] = {{"n", m.n}, {"mean", m.mean}, {"se", m.se}};
    summaries.push_back({{"condition", s.condition}, {"completed", s.completed}, {"failed", s.failed}, {"metrics", metrics}});
  }
  json flags = json::array();
  for (const auto& f : report.flags) flags.push_back({{"name", f.name}, {"holds", f.holds}, {"detail", f.detail}});
  return {{"experiment", report.experiment},
          {"summaries", summaries},
          {"flags", flags},
          {"warnings", report.warnings},
          {"runs_csv", pecan::runs_csv(report)},
          {"table", pecan::summary_table(report)}};
}

}  // namespace

extern "C" {

const char* pecan_version(void) { return "1.0.0"; }

const char* pecan_status_name(pecan_status status) {
  switch (status) {
    case PECAN_OK: return "ok";
    case PECAN_ERR_IO: return "io";
    case PECAN_ERR_PARSE: return "parse";
    case PECAN_ERR_VALIDATION: return "validation";
    case PECAN_ERR_SHAPE: return "shape";
    case PECAN_ERR_VERSION: return "version";
    case PECAN_ERR_NUMERIC: return "numeric";
    case PECAN_ERR_DOMAIN: return "domain";
    case PECAN_ERR_CONFIG: return "config";
    case PECAN_ERR_SPEC: return "spec";
    case PECAN_ERR_DEGENERATE: return "degenerate";
    case PECAN_ERR_ARGUMENT: return "argument";
    case PECAN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* pecan_last_error(void) { return g_last_error.c_str(); }

void pecan_string_free(char* s) { std::free(s); }

pecan_status pecan_set_log_level(const char* level) {
  PECAN_REQUIRE(level);
  return guarded([&] { pecan::set_log_level(level); });
}

pecan_status pecan_init_logging(const char* fallback) {
  return guarded([&] { pecan::init_logging(fallback != nullptr ? fallback : "warn"); });
}

pecan_status pecan_dataset_generate(const char* spec_json, pecan_dataset** out) {
  PECAN_REQUIRE(spec_json);
  PECAN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto ds = std::make_unique<pecan_dataset>(pecan_dataset{pecan::build_dataset(pecan::dataset_spec_from_json(spec_json))});
    *out = ds.release();
  });
}

pecan_status pecan_dataset_load(const char* path, pecan_dataset** out) {
  PECAN_REQUIRE(path);
  PECAN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new pecan_dataset{pecan::load_dataset(path)}; });
}

pecan_status pecan_dataset_from_json(const char* text, pecan_dataset** out) {
  PECAN_REQUIRE(text);
  PECAN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new pecan_dataset{pecan::dataset_from_json(text)}; });
}

pecan_status pecan_dataset_save(const pecan_dataset* dataset, const char* path) {
  PECAN_REQUIRE(dataset);
  PECAN_REQUIRE(path);
  return guarded([&] { pecan::save_dataset(dataset->value, path); });
}

pecan_status pecan_dataset_to_json(const pecan_dataset* dataset, char** out) {
  PECAN_REQUIRE(dataset);
  PECAN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = copy_out(pecan::dataset_to_json(dataset->value)); });
}

size_t pecan_dataset_size(const pecan_dataset* dataset) { return dataset != nullptr ? dataset->value.size() : 0; }

size_t pecan_dataset_num_labels(const pecan_dataset* dataset) {
  return dataset != nullptr ? dataset->value.num_classes() : 0;
}

pecan_status pecan_dataset_diagnose(const pecan_dataset* dataset, double separation, char** out_json) {
  PECAN_REQUIRE(dataset);
  PECAN_REQUIRE(out_json);
  *out_json = nullptr;
  return guarded([&] {
    *out_json = copy_out(pecan::diagnostics_to_json(pecan::diagnose_dataset(dataset->value, 20, separation)));
  });
}

void pecan_dataset_free(pecan_dataset* dataset) { delete dataset; }

pecan_status pecan_model_train(const pecan_dataset* dataset, const char* config_json, pecan_model** out,
                               char** loss_history_json) {
  PECAN_REQUIRE(dataset);
  PECAN_REQUIRE(out);
  *out = nullptr;
  if (loss_history_json != nullptr) *loss_history_json = nullptr;
  return guarded([&] {
    const pecan::RunConfig cfg = pecan::run_config_from_json(config_json != nullptr ? config_json : "{}");
    pecan::TrainResult result = pecan::train_on(dataset->value, cfg.model, cfg.train);
    std::string history;
    if (loss_history_json != nullptr) {
      json h = json::array();
      for (const auto& l : result.history) h.push_back({l.trajectory, l.cross_entropy, l.total});
      history = h.dump();
    }
    auto model = std::make_unique<pecan_model>(pecan_model{std::move(result.model)});
    if (loss_history_json != nullptr) *loss_history_json = copy_out(history);
    *out = model.release();
  });
}

pecan_status pecan_model_load(const char* path, pecan_model** out) {
  PECAN_REQUIRE(path);
  PECAN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new pecan_model{pecan::PecanModel::from_checkpoint(pecan::load_checkpoint(path))};
  });
}

pecan_status pecan_model_save(const pecan_model* model, const char* path) {
  PECAN_REQUIRE(model);
  PECAN_REQUIRE(path);
  return guarded([&] { pecan::save_checkpoint(model->value.to_checkpoint(), path); });
}

pecan_status pecan_model_to_json(const pecan_model* model, char** out) {
  PECAN_REQUIRE(model);
  PECAN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = copy_out(pecan::checkpoint_to_json(model->value.to_checkpoint())); });
}

pecan_status pecan_model_info(const pecan_model* model, char** out_json) {
  PECAN_REQUIRE(model);
  PECAN_REQUIRE(out_json);
  *out_json = nullptr;
  return guarded([&] { *out_json = copy_out(pecan::model_info_json(model->value)); });
}

size_t pecan_model_d_tau(const pecan_model* model) { return model != nullptr ? model->value.d_tau() : 0; }

size_t pecan_model_d_theta(const pecan_model* model) { return model != nullptr ? model->value.d_theta() : 0; }

pecan_status pecan_model_evaluate(const pecan_model* model, const pecan_dataset* eval_set, char** out_json) {
  PECAN_REQUIRE(model);
  PECAN_REQUIRE(eval_set);
  PECAN_REQUIRE(out_json);
  *out_json = nullptr;
  return guarded(
      [&] { *out_json = copy_out(pecan::eval_report_to_json(pecan::evaluate(model->value, eval_set->value))); });
}

pecan_status pecan_model_encode(const pecan_model* model, const pecan_dataset* dataset, char** out_json) {
  PECAN_REQUIRE(model);
  PECAN_REQUIRE(dataset);
  PECAN_REQUIRE(out_json);
  *out_json = nullptr;
  return guarded([&] {
    const auto enc = model->value.encode_all(dataset->value.trajectories());
    json style = json::array();
    for (Eigen::Index i = 0; i < enc.style.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index d = 0; d < enc.style.cols(); ++d) row.push_back(enc.style(i, d));
      style.push_back(row);
    }
    *out_json = copy_out(json{{"task", enc.task}, {"style", style}}.dump());
  });
}

pecan_status pecan_model_decode(const pecan_model* model, size_t task_id, const double* z, size_t z_len,
                                char** out_json) {
  PECAN_REQUIRE(model);
  PECAN_REQUIRE(out_json);
  if (z == nullptr && z_len > 0) return set_error(PECAN_ERR_ARGUMENT, "z is NULL");
  *out_json = nullptr;
  return guarded([&] {
    *out_json = copy_out(pecan::decode_json(model->value, task_id, std::span<const double>(z, z_len)));
  });
}

void pecan_model_free(pecan_model* model) { delete model; }

pecan_status pecan_experiment_run(const char* plan_json, const char* cache_dir, char** out_json) {
  PECAN_REQUIRE(plan_json);
  PECAN_REQUIRE(out_json);
  *out_json = nullptr;
  return guarded([&] {
    const pecan::ExperimentPlan plan = pecan::plan_from_json(plan_json);
    std::optional<pecan::RunCache> cache;
    if (cache_dir != nullptr && *cache_dir != '\0') cache.emplace(cache_dir);
    const auto report = pecan::run_experiment(plan, cache ? &*cache : nullptr);
    *out_json = copy_out(report_json(report).dump());
  });
}

pecan_status pecan_service_create(const pecan_model* model, pecan_service** out) {
  PECAN_REQUIRE(model);
  PECAN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new pecan_service(model->value); });
}

pecan_status pecan_service_handle(pecan_service* service, const char* method, const char* path, const char* body,
                                  int* status, char** out_body) {
  PECAN_REQUIRE(service);
  PECAN_REQUIRE(method);
  PECAN_REQUIRE(path);
  PECAN_REQUIRE(status);
  PECAN_REQUIRE(out_body);
  *out_body = nullptr;
  return guarded([&] {
    const auto r = service->value.handle(method, path, body != nullptr ? body : "");
    *out_body = copy_out(r.body);
    *status = r.status;
  });
}

void pecan_service_free(pecan_service* service) { delete service; }

pecan_status pecan_server_start(pecan_service* service, const char* host, int port, pecan_server** out,
                                int* bound_port) {
  PECAN_REQUIRE(service);
  PECAN_REQUIRE(host);
  PECAN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto server = std::make_unique<pecan_server>(service->value);
    const int bound = server->http.bind(host, port);
    pecan_server* s = server.get();
    s->thread = std::thread([s] { s->http.listen(); });
    s->http.wait_until_ready();
    if (bound_port != nullptr) *bound_port = bound;
    *out = server.release();
  });
}

void pecan_server_wait(pecan_server* server) {
  if (server != nullptr && server->thread.joinable()) server->thread.join();
}

void pecan_server_stop(pecan_server* server) {
  if (server != nullptr) server->http.stop();
}

void pecan_server_free(pecan_server* server) {
  if (server == nullptr) return;
  server->http.stop();
  if (server->thread.joinable()) server->thread.join();
  delete server;
}

}  // extern "C"
