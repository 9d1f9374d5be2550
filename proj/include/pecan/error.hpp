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

#include <stdexcept>
#include <string>

namespace pecan {

enum class ErrorCode {
  kIo,          // file missing or unwritable
  kParse,       // malformed document / schema violation
  kValidation,  // well-formed but inconsistent contents
  kShape,       // dimension mismatch
  kVersion,     // unsupported format version
  kNumeric,     // NaN / Inf encountered
  kDomain,      // argument outside the accepted domain
  kConfig,      // invalid configuration value
  kSpec,        // impossible dataset or experiment specification
  kDegenerate,  // evaluation input admits no meaningful answer
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace pecan
