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
#pragma once

// JSON-over-HTTP access to one trained model. The handlers are plain
// functions of (method, path, body) so they can be exercised without a
// socket; HttpServer binds them to a port.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pecan/model.hpp"

namespace pecan {

struct HttpResponse {
  int status = 200;
  std::string body;  // always a JSON document

  bool operator==(const HttpResponse&) const = default;
};

struct Click {
  std::size_t task_id = 0;
  std::vector<double> z;
  double timestamp = 0.0;  // client supplied, else server time in seconds since the epoch
};

class Service {
 public:
  explicit Service(PecanModel model);

  /// GET /model: d_tau, d_theta, task names, trajectory shape, corners.
  HttpResponse model_info() const;
  /// POST /decode with {"task_id": i, "z": [...]}.
  HttpResponse decode(std::string_view body) const;
  /// GET /session/{id}/clicks. Unknown sessions start empty.
  HttpResponse clicks(std::string_view session);
  /// POST /session/{id}/clicks with {"task_id", "z", optional "timestamp"}.
  HttpResponse add_click(std::string_view session, std::string_view body);

  /// Routes a request; unknown paths give a JSON 404, wrong methods a 405.
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  const PecanModel& model() const { return model_; }

 private:
  HttpResponse history(const std::string& session) const;  // caller holds mu_

  const PecanModel model_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<Click>> sessions_;  // in memory only
};

/// Body of GET /model for `model`.
std::string model_info_json(const PecanModel& model);
/// Body of a successful POST /decode. kDomain/kShape on an invalid request.
std::string decode_json(const PecanModel& model, std::size_t task_id, std::span<const double> z);

/// Error body: {"error": {"code": ..., "field": ..., "message": ...}}.
HttpResponse error_response(int status, std::string_view code, std::string_view field, std::string_view message);

/// Blocking HTTP front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port (port 0 picks a free one) and returns the bound port.
  /// Throws kIo when the address cannot be bound.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called from another thread.
  void listen();
  /// Blocks until listen() is accepting connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; kConfig when malformed.
std::pair<std::string, int> parse_bind_address(std::string_view address);

}  // namespace pecan
