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
#include "pecan/service.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"
#include "pecan/envgen.hpp"
#include "pecan/error.hpp"

namespace pecan {

namespace {

using nlohmann::json;

// A request that failed validation; carries the offending field.
struct BadRequest {
  std::string field;
  std::string message;
};

HttpResponse ok(const json& j) { return {200, j.dump() + "\n"}; }

json rows(const std::vector<double>& flat, std::size_t steps, std::size_t width) {
  json out = json::array();
  for (std::size_t t = 0; t < steps; ++t) {
    out.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(t * width),
                                      flat.begin() + static_cast<std::ptrdiff_t>((t + 1) * width)));
  }
  return out;
}

struct ParsedRequest {
  std::size_t task_id = 0;
  std::vector<double> z;
  std::optional<double> timestamp;
};

std::optional<BadRequest> parse_request(std::string_view body, const PecanModel& model, bool allow_timestamp,
                                        ParsedRequest& out) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception&) {
    return BadRequest{"body", "request body is not valid JSON"};
  }
  if (!j.is_object()) return BadRequest{"body", "request body must be a JSON object"};
  for (const auto& [key, value] : j.items()) {
    if (key != "task_id" && key != "z" && !(allow_timestamp && key == "timestamp")) {
      return BadRequest{key, "unknown field"};
    }
  }
  if (!j.contains("task_id")) return BadRequest{"task_id", "missing"};
  const auto& t = j["task_id"];
  if (!t.is_number_unsigned()) return BadRequest{"task_id", "must be a non-negative integer"};
  out.task_id = t.get<std::size_t>();
  if (out.task_id >= model.d_tau()) {
    return BadRequest{"task_id", fmt::format("task {} does not exist; the model has {} tasks", out.task_id, model.d_tau())};
  }
  if (!j.contains("z")) return BadRequest{"z", "missing"};
  const auto& z = j["z"];
  if (!z.is_array()) return BadRequest{"z", "must be an array of numbers"};
  if (z.size() != model.d_theta()) {
    return BadRequest{"z", fmt::format("has {} components, the canonical space has {}", z.size(), model.d_theta())};
  }
  out.z.clear();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const std::string name = fmt::format("z[{}]", i);
    if (!z[i].is_number()) return BadRequest{name, "must be a number"};
    const double v = z[i].get<double>();
    if (!(v >= -1.0 && v <= 1.0)) return BadRequest{name, fmt::format("{} lies outside [-1, 1]", v)};
    out.z.push_back(v);
  }
  if (allow_timestamp && j.contains("timestamp")) {
    if (!j["timestamp"].is_number()) return BadRequest{"timestamp", "must be a number"};
    out.timestamp = j["timestamp"].get<double>();
  }
  return std::nullopt;
}

json style_summary(const PecanModel& model, const Trajectory& t) {
  const auto& meta = model.meta();
  if (meta.environment == "driving" && meta.dt > 0.0 && t.state_dim() == 4 && t.action_dim() == 2) {
    const DrivingSummary s = summarize_driving(t, meta.dt);
    return {{"max_speed_kmh", s.max_speed_kmh}, {"min_gap_ft", s.min_gap_ft}};
  }
  // Without a known environment, report the range each state dimension covers.
  std::vector<double> lo(t.state_dim(), INFINITY);
  std::vector<double> hi(t.state_dim(), -INFINITY);
  for (std::size_t k = 0; k < t.steps(); ++k) {
    const auto s = t.state(k);
    for (std::size_t d = 0; d < s.size(); ++d) {
      lo[d] = std::min(lo[d], s[d]);
      hi[d] = std::max(hi[d], s[d]);
    }
  }
  return {{"state_min", lo}, {"state_max", hi}};
}

json click_json(const Click& c) { return {{"task_id", c.task_id}, {"z", c.z}, {"timestamp", c.timestamp}}; }

}  // namespace

HttpResponse error_response(int status, std::string_view code, std::string_view field, std::string_view message) {
  json e = {{"code", code}, {"message", message}};
  e["field"] = field.empty() ? json(nullptr) : json(field);
  return {status, json{{"error", e}}.dump() + "\n"};
}

Service::Service(PecanModel model) : model_(std::move(model)) {
  if (model_.d_tau() == 0 || model_.d_theta() == 0) fail(ErrorCode::kValidation, "service needs a trained model");
}

std::string model_info_json(const PecanModel& model) {
  const auto& meta = model.meta();
  json corners = json::array();
  for (const auto& c : meta.corners) {
    json j = {{"class_index", c.class_index}, {"z", c.z}};
    if (!c.style.empty()) j["style"] = c.style;
    corners.push_back(j);
  }
  std::vector<std::string> names = meta.task_names;
  if (names.size() != model.d_tau()) {
    names.clear();
    for (std::size_t i = 0; i < model.d_tau(); ++i) names.push_back(fmt::format("task {}", i));
  }
  const auto& shape = model.shape();
  const json j = {
      {"d_tau", model.d_tau()},
      {"d_theta", model.d_theta()},
      {"task_names", names},
      {"environment", meta.environment},
      {"dt", meta.dt},
      {"traj_shape", {{"steps", shape.steps}, {"state_dim", shape.state_dim}, {"action_dim", shape.action_dim}}},
      {"corners", corners}};
  return j.dump() + "\n";
}

std::string decode_json(const PecanModel& model, std::size_t task_id, std::span<const double> z) {
  if (task_id >= model.d_tau()) {
    fail(ErrorCode::kDomain, fmt::format("task {} does not exist; the model has {} tasks", task_id, model.d_tau()));
  }
  std::vector<double> z_tau(model.d_tau(), 0.0);
  z_tau[task_id] = 1.0;
  const Trajectory t = model.decode(z_tau, z);
  const json j = {{"request", {{"task_id", task_id}, {"z", std::vector<double>(z.begin(), z.end())}}},
                  {"trajectory",
                   {{"states", rows(t.states(), t.steps(), t.state_dim())},
                    {"actions", rows(t.actions(), t.steps(), t.action_dim())}}},
                  {"style_summary", style_summary(model, t)}};
  return j.dump() + "\n";
}

HttpResponse Service::model_info() const { return {200, model_info_json(model_)}; }

HttpResponse Service::decode(std::string_view body) const {
  ParsedRequest req;
  if (auto bad = parse_request(body, model_, false, req)) {
    return error_response(400, "invalid_request", bad->field, bad->message);
  }
  return {200, decode_json(model_, req.task_id, req.z)};
}

HttpResponse Service::history(const std::string& session) const {
  json list = json::array();
  if (auto it = sessions_.find(session); it != sessions_.end()) {
    for (const auto& c : it->second) list.push_back(click_json(c));
  }
  return ok({{"session", session}, {"clicks", list}});
}

HttpResponse Service::clicks(std::string_view session) {
  std::lock_guard lock(mu_);
  const std::string id(session);
  sessions_.try_emplace(id);
  return history(id);
}

HttpResponse Service::add_click(std::string_view session, std::string_view body) {
  ParsedRequest req;
  if (auto bad = parse_request(body, model_, true, req)) {
    return error_response(400, "invalid_request", bad->field, bad->message);
  }
  Click c;
  c.task_id = req.task_id;
  c.z = req.z;
  c.timestamp = req.timestamp.value_or(
      std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count());
  std::lock_guard lock(mu_);
  const std::string id(session);
  sessions_[id].push_back(std::move(c));
  return history(id);
}

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    if (path == "/model") {
      if (method != "GET") return error_response(405, "method_not_allowed", "", "use GET /model");
      return model_info();
    }
    if (path == "/decode") {
      if (method != "POST") return error_response(405, "method_not_allowed", "", "use POST /decode");
      return decode(body);
    }
    constexpr std::string_view kPrefix = "/session/";
    constexpr std::string_view kSuffix = "/clicks";
    if (path.starts_with(kPrefix) && path.ends_with(kSuffix) && path.size() > kPrefix.size() + kSuffix.size()) {
      const auto id = path.substr(kPrefix.size(), path.size() - kPrefix.size() - kSuffix.size());
      if (id.find('/') == std::string_view::npos) {
        if (method == "GET") return clicks(id);
        if (method == "POST") return add_click(id, body);
        return error_response(405, "method_not_allowed", "", "use GET or POST on a session's clicks");
      }
    }
    return error_response(404, "not_found", "", fmt::format("no endpoint at {}", path));
  } catch (const std::exception& e) {
    spdlog::error("request {} {} failed: {}", method, path, e.what());
    return error_response(500, "internal", "", e.what());
  }
}

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  // httplib defaults to SO_REUSEPORT, which lets a second server share a busy
  // port without an error.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  const auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = impl_->service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, "application/json");
    spdlog::debug("{} {} -> {}", req.method, req.path, r.status);
  };
  srv.Get(R"(/.*)", dispatch);
  srv.Post(R"(/.*)", dispatch);
  srv.Put(R"(/.*)", dispatch);
  srv.Delete(R"(/.*)", dispatch);
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  const int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
  if (bound < 0) fail(ErrorCode::kIo, fmt::format("cannot bind {}:{}", host, port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

std::pair<std::string, int> parse_bind_address(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == address.size()) {
    fail(ErrorCode::kConfig, fmt::format("bind address '{}' must look like host:port", address));
  }
  const std::string port_text(address.substr(colon + 1));
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(port_text, &used);
    if (used != port_text.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    fail(ErrorCode::kConfig, fmt::format("port '{}' is not a number", port_text));
  }
  if (port < 0 || port > 65535) fail(ErrorCode::kConfig, fmt::format("port {} is out of range", port));
  return {std::string(address.substr(0, colon)), port};
}

}  // namespace pecan
