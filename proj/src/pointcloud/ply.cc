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

#include "mgpc/pointcloud/ply.h"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "mgpc/common/bytes.h"
#include "mgpc/common/error.h"

namespace mgpc {
namespace {

enum class ScalarType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::optional<ScalarType> ParseScalarType(std::string_view name) {
  if (name == "char" || name == "int8") return ScalarType::kInt8;
  if (name == "uchar" || name == "uint8") return ScalarType::kUint8;
  if (name == "short" || name == "int16") return ScalarType::kInt16;
  if (name == "ushort" || name == "uint16") return ScalarType::kUint16;
  if (name == "int" || name == "int32") return ScalarType::kInt32;
  if (name == "uint" || name == "uint32") return ScalarType::kUint32;
  if (name == "float" || name == "float32") return ScalarType::kFloat32;
  if (name == "double" || name == "float64") return ScalarType::kFloat64;
  return std::nullopt;
}

size_t ScalarSize(ScalarType t) {
  switch (t) {
    case ScalarType::kInt8:
    case ScalarType::kUint8: return 1;
    case ScalarType::kInt16:
    case ScalarType::kUint16: return 2;
    case ScalarType::kInt32:
    case ScalarType::kUint32:
    case ScalarType::kFloat32: return 4;
    case ScalarType::kFloat64: return 8;
  }
  return 0;
}

// Slot of each property in the vertex record: 0..2 = x,y,z, 3..5 = r,g,b.
constexpr std::array<std::string_view, 6> kRequired = {"x", "y", "z", "red", "green", "blue"};

struct Header {
  bool binary = false;
  size_t vertex_count = 0;
  std::vector<ScalarType> types;  // in file order
  std::vector<int> slots;         // in file order
  size_t body_offset = 0;
};

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedHeader, "malformed PLY header: " + what);
}

std::vector<std::string_view> SplitWords(std::string_view line) {
  std::vector<std::string_view> words;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

Header ParseHeader(std::span<const uint8_t> bytes) {
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  Header h;
  size_t pos = 0;
  int line_no = 0;
  bool have_format = false;
  bool have_vertex = false;
  std::array<bool, 6> seen{};
  while (true) {
    const size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) Malformed("missing end_header");
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    const auto words = SplitWords(line);
    if (line_no == 1) {
      if (words.size() != 1 || words[0] != "ply") Malformed("first line must be 'ply'");
      continue;
    }
    if (words.empty()) continue;
    const std::string_view kw = words[0];
    if (kw == "comment" || kw == "obj_info") continue;
    if (kw == "end_header") break;
    if (kw == "format") {
      if (words.size() != 3) Malformed("bad format line");
      if (words[1] == "ascii") {
        h.binary = false;
      } else if (words[1] == "binary_little_endian") {
        h.binary = true;
      } else {
        throw Error(ErrorCode::kUnsupportedProperty,
                    "unsupported PLY format '" + std::string(words[1]) + "'");
      }
      have_format = true;
    } else if (kw == "element") {
      if (words.size() != 3) Malformed("bad element line");
      if (words[1] != "vertex") {
        throw Error(ErrorCode::kUnsupportedProperty,
                    "unsupported PLY element '" + std::string(words[1]) + "'");
      }
      if (have_vertex) Malformed("duplicate vertex element");
      size_t count = 0;
      auto [p, ec] = std::from_chars(words[2].data(), words[2].data() + words[2].size(), count);
      if (ec != std::errc() || p != words[2].data() + words[2].size()) Malformed("bad vertex count");
      h.vertex_count = count;
      have_vertex = true;
    } else if (kw == "property") {
      if (!have_vertex) Malformed("property before element");
      if (words.size() >= 2 && words[1] == "list") {
        throw Error(ErrorCode::kUnsupportedProperty, "list properties are not supported");
      }
      if (words.size() != 3) Malformed("bad property line");
      const auto type = ParseScalarType(words[1]);
      if (!type) Malformed("unknown property type '" + std::string(words[1]) + "'");
      int slot = -1;
      for (int s = 0; s < 6; ++s) {
        if (words[2] == kRequired[s]) slot = s;
      }
      if (slot < 0) {
        throw Error(ErrorCode::kUnsupportedProperty,
                    "unsupported vertex property '" + std::string(words[2]) + "'");
      }
      if (seen[slot]) Malformed("duplicate property '" + std::string(words[2]) + "'");
      if (slot >= 3 && *type != ScalarType::kUint8) {
        throw Error(ErrorCode::kUnsupportedProperty,
                    "color property '" + std::string(words[2]) + "' must be uchar");
      }
      seen[slot] = true;
      h.types.push_back(*type);
      h.slots.push_back(slot);
    } else {
      Malformed("unexpected keyword '" + std::string(kw) + "'");
    }
  }
  if (!have_format) Malformed("missing format line");
  if (!have_vertex) Malformed("missing vertex element");
  for (int s = 0; s < 6; ++s) {
    if (!seen[s]) {
      throw Error(ErrorCode::kMissingProperty,
                  "missing required property '" + std::string(kRequired[s]) + "'");
    }
  }
  h.body_offset = pos;
  return h;
}

uint32_t CoordinateFromDouble(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kCorruptStream, "non-finite coordinate in PLY body");
  }
  const double r = std::round(v);  // half away from zero
  if (r < 0.0) {
    throw Error(ErrorCode::kNegativeCoordinate,
                "negative coordinate " + std::to_string(v) + " after rounding");
  }
  if (r >= 2147483648.0) {
    throw Error(ErrorCode::kResolutionOverflow, "coordinate exceeds 31 bits");
  }
  return static_cast<uint32_t>(r);
}

double ReadBinaryScalar(const uint8_t* p, ScalarType t) {
  uint64_t raw = 0;
  const size_t n = ScalarSize(t);
  for (size_t i = 0; i < n; ++i) raw |= static_cast<uint64_t>(p[i]) << (8 * i);
  switch (t) {
    case ScalarType::kInt8: return static_cast<int8_t>(raw);
    case ScalarType::kUint8: return static_cast<uint8_t>(raw);
    case ScalarType::kInt16: return static_cast<int16_t>(raw);
    case ScalarType::kUint16: return static_cast<uint16_t>(raw);
    case ScalarType::kInt32: return static_cast<int32_t>(raw);
    case ScalarType::kUint32: return static_cast<uint32_t>(raw);
    case ScalarType::kFloat32: return std::bit_cast<float>(static_cast<uint32_t>(raw));
    case ScalarType::kFloat64: return std::bit_cast<double>(raw);
  }
  return 0.0;
}

void StoreValue(PointCloud& cloud, size_t index, int slot, double v) {
  if (slot < 3) {
    cloud.positions[index][slot] = CoordinateFromDouble(v);
  } else {
    cloud.colors[index][slot - 3] = static_cast<uint8_t>(v);
  }
}

void ParseAsciiBody(std::string_view body, const Header& h, PointCloud& cloud) {
  size_t pos = 0;
  auto next_token = [&]() -> std::optional<std::string_view> {
    while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
    if (pos >= body.size()) return std::nullopt;
    const size_t start = pos;
    while (pos < body.size() && !std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
    return body.substr(start, pos - start);
  };
  for (size_t i = 0; i < h.vertex_count; ++i) {
    for (size_t k = 0; k < h.types.size(); ++k) {
      const auto tok = next_token();
      if (!tok) {
        throw Error(ErrorCode::kCountMismatch,
                    "element count mismatch: header declares " +
                        std::to_string(h.vertex_count) + " vertices, body ends in vertex " +
                        std::to_string(i));
      }
      double v = 0.0;
      auto [p, ec] = std::from_chars(tok->data(), tok->data() + tok->size(), v);
      if (ec != std::errc() || p != tok->data() + tok->size()) {
        throw Error(ErrorCode::kCorruptStream,
                    "malformed PLY value '" + std::string(*tok) + "'");
      }
      if (h.slots[k] >= 3 && (v != std::floor(v) || v < 0.0 || v > 255.0)) {
        throw Error(ErrorCode::kCorruptStream,
                    "color value '" + std::string(*tok) + "' is not a uchar");
      }
      StoreValue(cloud, i, h.slots[k], v);
    }
  }
  if (next_token()) {
    throw Error(ErrorCode::kCountMismatch,
                "element count mismatch: data continues past " +
                    std::to_string(h.vertex_count) + " vertices");
  }
}

void ParseBinaryBody(std::span<const uint8_t> body, const Header& h, PointCloud& cloud) {
  size_t record = 0;
  for (ScalarType t : h.types) record += ScalarSize(t);
  const size_t expected = record * h.vertex_count;
  if (body.size() != expected) {
    throw Error(ErrorCode::kCountMismatch,
                "element count mismatch: header declares " + std::to_string(h.vertex_count) +
                    " vertices (" + std::to_string(expected) + " bytes), body has " +
                    std::to_string(body.size()) + " bytes");
  }
  const uint8_t* p = body.data();
  for (size_t i = 0; i < h.vertex_count; ++i) {
    for (size_t k = 0; k < h.types.size(); ++k) {
      StoreValue(cloud, i, h.slots[k], ReadBinaryScalar(p, h.types[k]));
      p += ScalarSize(h.types[k]);
    }
  }
}

}  // namespace

PointCloud ParsePly(std::span<const uint8_t> bytes) {
  const Header h = ParseHeader(bytes);
  PointCloud cloud;
  cloud.positions.resize(h.vertex_count);
  cloud.colors.resize(h.vertex_count);
  const auto body = bytes.subspan(h.body_offset);
  if (h.binary) {
    ParseBinaryBody(body, h, cloud);
  } else {
    ParseAsciiBody(std::string_view(reinterpret_cast<const char*>(body.data()), body.size()),
                   h, cloud);
  }
  cloud.resolution_bits = MinResolutionBits(cloud.positions);
  return cloud;
}

std::vector<uint8_t> WritePly(const PointCloud& cloud, PlyFormat format) {
  if (cloud.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "empty cloud not writable");
  }
  ValidateCloud(cloud);
  for (const Position& p : cloud.positions) {
    for (uint32_t v : p) {
      if (v >= (1u << 24)) {
        throw Error(ErrorCode::kResolutionOverflow,
                    "coordinate " + std::to_string(v) + " not exact in float32");
      }
    }
  }
  std::ostringstream header;
  header << "ply\n"
         << (format == PlyFormat::kAscii ? "format ascii 1.0\n"
                                         : "format binary_little_endian 1.0\n")
         << "element vertex " << cloud.size() << "\n"
         << "property float x\nproperty float y\nproperty float z\n"
         << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
         << "end_header\n";
  ByteWriter out;
  out.PutString(header.str());
  if (format == PlyFormat::kAscii) {
    std::string line;
    for (size_t i = 0; i < cloud.size(); ++i) {
      const Position& p = cloud.positions[i];
      const Color& c = cloud.colors[i];
      line = std::to_string(p[0]) + ' ' + std::to_string(p[1]) + ' ' + std::to_string(p[2]) +
             ' ' + std::to_string(c[0]) + ' ' + std::to_string(c[1]) + ' ' +
             std::to_string(c[2]) + '\n';
      out.PutString(line);
    }
  } else {
    for (size_t i = 0; i < cloud.size(); ++i) {
      for (uint32_t v : cloud.positions[i]) {
        out.PutU32(std::bit_cast<uint32_t>(static_cast<float>(v)));
      }
      for (uint8_t v : cloud.colors[i]) out.PutU8(v);
    }
  }
  return out.Release();
}

PointCloud ReadPlyFile(const std::filesystem::path& path) {
  return ParsePly(ReadFileBytes(path));
}

void WritePlyFile(const std::filesystem::path& path, const PointCloud& cloud,
                  PlyFormat format) {
  WriteFileAtomic(path, WritePly(cloud, format));
}

}  // namespace mgpc
