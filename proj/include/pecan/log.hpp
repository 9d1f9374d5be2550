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

#include <string_view>

namespace pecan {

/// "trace", "debug", "info", "warn", "error", "critical" or "off"; kConfig
/// otherwise. Messages go to standard error.
void set_log_level(std::string_view level);

/// Applies PECAN_LOG when set, else `fallback`.
void init_logging(std::string_view fallback = "warn");

}  // namespace pecan
