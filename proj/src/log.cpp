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
#include "pecan/log.hpp"

#include <cstdlib>
#include <string>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pecan/error.hpp"

namespace pecan {

namespace {

void ensure_stderr_logger() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("pecan");
    logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)once;
}

}  // namespace

void set_log_level(std::string_view level) {
  ensure_stderr_logger();
  const auto parsed = spdlog::level::from_str(std::string(level));
  // from_str maps unknown names to off; only accept that for "off" itself.
  if (parsed == spdlog::level::off && level != "off") {
    fail(ErrorCode::kConfig, fmt::format("unknown log level '{}'", level));
  }
  spdlog::set_level(parsed);
}

void init_logging(std::string_view fallback) {
  const char* env = std::getenv("PECAN_LOG");
  set_log_level(env != nullptr && *env != '\0' ? std::string_view(env) : fallback);
}

}  // namespace pecan
