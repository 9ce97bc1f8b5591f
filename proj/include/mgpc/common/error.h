// Copyright 2026 The MGPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGPC_COMMON_ERROR_H_
#define MGPC_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace mgpc {

// Every failure the library reports carries one of these codes so callers
// (and tests) can tell diagnostics apart without matching on message text.
enum class ErrorCode {
  kMalformedHeader,
  kMissingProperty,
  kUnsupportedProperty,
  kCountMismatch,
  kNegativeCoordinate,
  kEmptyCloud,
  kResolutionOverflow,
  kShapeMismatch,
  kNotScalar,
  kNoGradient,
  kNonFinite,
  kSymbolOutOfSupport,
  kTruncatedStream,
  kCorruptStream,
  kVersionMismatch,
  kGeometryMismatch,
  kInvalidArgument,
  kChecksumMismatch,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mgpc

#endif  // MGPC_COMMON_ERROR_H_
