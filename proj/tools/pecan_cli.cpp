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

// pecan: command-line front end over libpecan's C interface.
//
// Exit codes: 0 success, 1 other failure, 2 usage, 3 missing or unwritable
// file, 4 schema mismatch, 5 numeric abort (NaN during training).

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pecan/pecan.h"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kMissingFile = 3, kSchema = 4, kNumeric = 5 };

// Thrown out of a command with the status of the failing library call.
struct CallFailed {
  pecan_status status;
  std::string message;
};

int exit_code(pecan_status s) {
  switch (s) {
    case PECAN_OK: return kOk;
    case PECAN_ERR_IO: return kMissingFile;
    case PECAN_ERR_PARSE:
    case PECAN_ERR_VALIDATION:
    case PECAN_ERR_SHAPE:
    case PECAN_ERR_VERSION: return kSchema;
    case PECAN_ERR_NUMERIC: return kNumeric;
    default: return kFailure;
  }
}

void check(pecan_status s) {
  if (s != PECAN_OK) throw CallFailed{s, pecan_last_error()};
}

struct FreeString {
  void operator()(char* s) const { pecan_string_free(s); }
};
using OwnedString = std::unique_ptr<char, FreeString>;

struct FreeHandle {
  void operator()(pecan_dataset* p) const { pecan_dataset_free(p); }
  void operator()(pecan_model* p) const { pecan_model_free(p); }
  void operator()(pecan_service* p) const { pecan_service_free(p); }
  void operator()(pecan_server* p) const { pecan_server_free(p); }
};
template <typename T>
using Handle = std::unique_ptr<T, FreeHandle>;

std::string take(char* s) { return std::string(OwnedString(s).get()); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CallFailed{PECAN_ERR_IO, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CallFailed{PECAN_ERR_IO, "cannot write " + path};
    out << text;
    if (!out.flush()) throw CallFailed{PECAN_ERR_IO, "cannot write " + path};
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw CallFailed{PECAN_ERR_IO, "cannot write " + path};
}

// A JSON config file, or {} when no file is given; a bad document is a schema error.
json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  const std::string text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw CallFailed{PECAN_ERR_PARSE, path + ": expected a JSON object"};
  return j;
}

Handle<pecan_dataset> load_dataset(const std::string& path) {
  pecan_dataset* d = nullptr;
  check(pecan_dataset_load(path.c_str(), &d));
  return Handle<pecan_dataset>(d);
}

Handle<pecan_model> load_model(const std::string& path) {
  pecan_model* m = nullptr;
  check(pecan_model_load(path.c_str(), &m));
  return Handle<pecan_model>(m);
}

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

struct Options {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::string bind = "127.0.0.1:8080";
  std::string checkpoint;
  std::string dataset;
  std::string eval_set;
  std::string cache;
  std::string history;
  double separation = 2.0;
  std::size_t task_id = 0;
  std::vector<double> z;
};

int cmd_generate(const Options& o) {
  json spec = read_config(o.config);
  if (o.seed) spec["seed"] = *o.seed;
  pecan_dataset* d = nullptr;
  check(pecan_dataset_generate(spec.dump().c_str(), &d));
  Handle<pecan_dataset> ds(d);
  if (o.out.empty() || o.out == "-") {
    char* text = nullptr;
    check(pecan_dataset_to_json(ds.get(), &text));
    write_file("", take(text));
  } else {
    check(pecan_dataset_save(ds.get(), o.out.c_str()));
  }
  std::cerr << "generated " << pecan_dataset_size(ds.get()) << " trajectories, " << pecan_dataset_num_labels(ds.get())
            << " label groups\n";
  return kOk;
}

int cmd_train(const Options& o) {
  json cfg = read_config(o.config);
  if (o.seed) cfg["seed"] = *o.seed;
  auto ds = load_dataset(o.dataset);
  pecan_model* m = nullptr;
  char* history = nullptr;
  check(pecan_model_train(ds.get(), cfg.dump().c_str(), &m, o.history.empty() ? nullptr : &history));
  Handle<pecan_model> model(m);
  if (!o.history.empty()) write_file(o.history, take(history));
  if (o.out.empty() || o.out == "-") {
    char* text = nullptr;
    check(pecan_model_to_json(model.get(), &text));
    write_file("", take(text));
  } else {
    check(pecan_model_save(model.get(), o.out.c_str()));
  }
  return kOk;
}

int cmd_eval(const Options& o) {
  auto model = load_model(o.checkpoint);
  auto eval_set = load_dataset(o.eval_set);
  char* report = nullptr;
  check(pecan_model_evaluate(model.get(), eval_set.get(), &report));
  write_file(o.out, take(report));
  return kOk;
}

int cmd_experiment(const Options& o) {
  json plan = read_config(o.config);
  if (!o.out.empty()) plan["output"] = o.out;
  char* result = nullptr;
  check(pecan_experiment_run(plan.dump().c_str(), o.cache.empty() ? nullptr : o.cache.c_str(), &result));
  const json r = json::parse(take(result));
  std::cout << r.at("table").get<std::string>();
  return kOk;
}

int cmd_serve(const Options& o) {
  const auto colon = o.bind.rfind(':');
  int port = -1;
  if (colon != std::string::npos && colon > 0) {
    try {
      std::size_t used = 0;
      port = std::stoi(o.bind.substr(colon + 1), &used);
      if (used != o.bind.size() - colon - 1) port = -1;
    } catch (const std::exception&) {
      port = -1;
    }
  }
  if (port < 0 || port > 65535) throw CallFailed{PECAN_ERR_CONFIG, "--bind must look like host:port, got " + o.bind};
  auto model = load_model(o.checkpoint);
  pecan_service* s = nullptr;
  check(pecan_service_create(model.get(), &s));
  Handle<pecan_service> service(s);
  pecan_server* srv = nullptr;
  int bound = 0;
  check(pecan_server_start(service.get(), o.bind.substr(0, colon).c_str(), port, &srv, &bound));
  Handle<pecan_server> server(srv);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "serving on " << o.bind.substr(0, colon) << ":" << bound << std::endl;
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  pecan_server_stop(server.get());
  return kOk;
}

int cmd_decode(const Options& o) {
  auto model = load_model(o.checkpoint);
  char* body = nullptr;
  check(pecan_model_decode(model.get(), o.task_id, o.z.data(), o.z.size(), &body));
  write_file(o.out, take(body));
  return kOk;
}

int cmd_info(const Options& o) {
  auto model = load_model(o.checkpoint);
  char* body = nullptr;
  check(pecan_model_info(model.get(), &body));
  write_file(o.out, take(body));
  return kOk;
}

int cmd_diagnose(const Options& o) {
  auto ds = load_dataset(o.dataset);
  char* body = nullptr;
  check(pecan_dataset_diagnose(ds.get(), o.separation, &body));
  write_file(o.out, take(body));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn, evaluate and serve canonical style spaces from demonstrations."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pecan_version()));
  Options o;

  const auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Override the seed in the config"); };

  auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset from a spec file");
  gen->add_option("--config", o.config, "Dataset spec (JSON); defaults apply when omitted");
  gen->add_option("--out", o.out, "Output dataset file (default: stdout)");
  add_seed(gen);

  auto* train = app.add_subcommand("train", "Train a model on a dataset");
  train->add_option("dataset", o.dataset, "Training dataset (JSON)")->required();
  train->add_option("--config", o.config, "Run config (JSON)");
  train->add_option("--out", o.out, "Output checkpoint (default: stdout)");
  train->add_option("--history", o.history, "Write per-epoch [trajectory, ce, total] losses here");
  add_seed(train);

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on an evaluation set with ground truth");
  eval->add_option("eval_set", o.eval_set, "Evaluation dataset (JSON)")->required();
  eval->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
  eval->add_option("--out", o.out, "Output report (default: stdout)");

  auto* exp = app.add_subcommand("experiment", "Run a seeded multi-run experiment");
  exp->add_option("--config", o.config, "Experiment plan (JSON)")->required();
  exp->add_option("--out", o.out, "Per-seed CSV (overrides the plan's output)");
  exp->add_option("--cache", o.cache, "Directory reusing finished runs across invocations");

  auto* serve = app.add_subcommand("serve", "Serve a checkpoint over HTTP until interrupted");
  serve->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
  serve->add_option("--bind", o.bind, "host:port (port 0 picks a free port)")->capture_default_str();

  auto* decode = app.add_subcommand("decode", "Decode one latent style to a trajectory");
  decode->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
  decode->add_option("--task", o.task_id, "Task index")->required();
  decode->add_option("--z", o.z, "Latent style components in [-1, 1]")->required()->expected(1, -1);
  decode->add_option("--out", o.out, "Output file (default: stdout)");

  auto* info = app.add_subcommand("info", "Print a checkpoint's metadata");
  info->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
  info->add_option("--out", o.out, "Output file (default: stdout)");

  auto* diag = app.add_subcommand("diagnose", "Report task-cluster separability of a dataset");
  diag->add_option("dataset", o.dataset, "Dataset with ground truth (JSON)")->required();
  diag->add_option("--separation", o.separation, "Separation factor S")->capture_default_str();
  diag->add_option("--out", o.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (pecan_init_logging("warn") != PECAN_OK) {
    std::cerr << "pecan: PECAN_LOG: " << pecan_last_error() << "\n";
    return kUsage;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*train) return cmd_train(o);
    if (*eval) return cmd_eval(o);
    if (*exp) return cmd_experiment(o);
    if (*serve) return cmd_serve(o);
    if (*decode) return cmd_decode(o);
    if (*info) return cmd_info(o);
    if (*diag) return cmd_diagnose(o);
  } catch (const CallFailed& e) {
    std::cerr << "pecan: " << pecan_status_name(e.status) << " error: " << e.message << "\n";
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "pecan: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
