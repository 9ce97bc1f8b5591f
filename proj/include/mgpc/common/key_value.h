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

#ifndef MGPC_COMMON_KEY_VALUE_H_
#define MGPC_COMMON_KEY_VALUE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgpc {

using KeyValueList = std::vector<std::pair<std::string, std::string>>;

// Flat "key = value" text: one pair per line, '#' starts a comment, blank
// lines are skipped, surrounding whitespace is trimmed. Duplicate keys and
// lines without '=' are errors (kInvalidArgument, with the line number).
KeyValueList ParseKeyValue(std::string_view text);

// Strict conversions; the key is only used in the error message.
double ParseDouble(std::string_view key, std::string_view value);
int64_t ParseInt(std::string_view key, std::string_view value);
uint64_t ParseUint(std::string_view key, std::string_view value);

}  // namespace mgpc

#endif  // MGPC_COMMON_KEY_VALUE_H_
