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

#include "mgpc/common/key_value.h"

#include <charconv>
#include <cmath>
#include <set>

#include "mgpc/common/error.h"

namespace mgpc {
namespace {

std::string_view Trim(std::string_view s) {
  const char* ws = " \t\r\n";
  size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Bad(std::string_view key, std::string_view value, const char* what) {
  throw Error(ErrorCode::kInvalidArgument, std::string(key) + ": '" + std::string(value) +
                                               "' is not " + what);
}

}  // namespace

KeyValueList ParseKeyValue(std::string_view text) {
  KeyValueList out;
  std::set<std::string, std::less<>> seen;
  size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "line " + std::to_string(line_no) + ": empty key");
    }
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

double ParseDouble(std::string_view key, std::string_view value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
    Bad(key, value, "a finite number");
  }
  return v;
}

int64_t ParseInt(std::string_view key, std::string_view value) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) Bad(key, value, "an integer");
  return v;
}

uint64_t ParseUint(std::string_view key, std::string_view value) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    Bad(key, value, "a non-negative integer");
  }
  return v;
}

}  // namespace mgpc
