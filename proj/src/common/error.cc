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

#include "mgpc/common/error.h"

namespace mgpc {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader: return "malformed header";
    case ErrorCode::kMissingProperty: return "missing required property";
    case ErrorCode::kUnsupportedProperty: return "unsupported property";
    case ErrorCode::kCountMismatch: return "element count mismatch";
    case ErrorCode::kNegativeCoordinate: return "negative coordinate";
    case ErrorCode::kEmptyCloud: return "empty cloud";
    case ErrorCode::kResolutionOverflow: return "resolution overflow";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kNotScalar: return "not a scalar";
    case ErrorCode::kNoGradient: return "no gradient";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kSymbolOutOfSupport: return "symbol outside support";
    case ErrorCode::kTruncatedStream: return "truncated stream";
    case ErrorCode::kCorruptStream: return "corrupt stream";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kGeometryMismatch: return "geometry mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kChecksumMismatch: return "checksum mismatch";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown";
}

}  // namespace mgpc
