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

#include <cstddef>
#include <vector>

namespace pecan {

inline constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

struct Assignment {
  std::vector<std::size_t> row_to_col;  // kUnassigned for rows left out
  double total = 0.0;
};

/// Maximum-weight matching on a rectangular weight matrix (rows x cols).
/// Exactly min(rows, cols) pairs are matched. Hungarian method, O(n^3).
Assignment max_weight_assignment(const std::vector<std::vector<double>>& weights);

}  // namespace pecan
