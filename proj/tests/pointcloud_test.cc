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

#include <algorithm>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "mgpc/common/error.h"
#include "mgpc/common/rng.h"
#include "mgpc/pointcloud/luma.h"
#include "mgpc/pointcloud/ply.h"
#include "mgpc/pointcloud/spatial.h"
#include "mgpc/pointcloud/toy_data.h"

namespace mgpc {
namespace {

std::vector<uint8_t> Bytes(const std::string& s) { return {s.begin(), s.end()}; }

PointCloud RandomCloud(size_t n, int bits, uint64_t seed) {
  Rng rng(seed);
  PointCloud c;
  for (size_t i = 0; i < n; ++i) {
    c.positions.push_back({static_cast<uint32_t>(rng.UniformInt(1u << bits)),
                           static_cast<uint32_t>(rng.UniformInt(1u << bits)),
                           static_cast<uint32_t>(rng.UniformInt(1u << bits))});
    c.colors.push_back({static_cast<uint8_t>(rng.UniformInt(256)),
                        static_cast<uint8_t>(rng.UniformInt(256)),
                        static_cast<uint8_t>(rng.UniformInt(256))});
  }
  c.resolution_bits = MinResolutionBits(c.positions);
  return c;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

const char* kOneVertex =
    "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
    "property float z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\n"
    "end_header\n0 0 0 255 0 0\n";

TEST(Ply, SingleAsciiVertex) {
  PointCloud c = ParsePly(Bytes(kOneVertex));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.colors[0], (Color{255, 0, 0}));
  EXPECT_EQ(c.positions[0], (Position{0, 0, 0}));
  EXPECT_EQ(c.resolution_bits, 1);
}

TEST(Ply, MissingBlueIsDiagnosed) {
  std::string text =
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
      "property float z\nproperty uchar red\nproperty uchar green\nend_header\n0 0 0 1 2\n";
  try {
    ParsePly(Bytes(text));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingProperty);
    EXPECT_NE(std::string(e.what()).find("missing required property"), std::string::npos);
  }
}

TEST(Ply, DistinctDiagnostics) {
  EXPECT_EQ(CodeOf([] { ParsePly(Bytes("ply\nformat ascii 1.0\nelement vertex 1\n")); }),
            ErrorCode::kMalformedHeader);
  std::string short_body = kOneVertex;
  short_body.replace(short_body.find("vertex 1"), 8, "vertex 2");
  EXPECT_EQ(CodeOf([&] { ParsePly(Bytes(short_body)); }), ErrorCode::kCountMismatch);
  std::string negative = kOneVertex;
  negative.replace(negative.find("0 0 0 255"), 9, "-2 0 0 255");
  EXPECT_EQ(CodeOf([&] { ParsePly(Bytes(negative)); }), ErrorCode::kNegativeCoordinate);
}

TEST(Ply, FloatCoordinatesRoundHalfAwayFromZero) {
  std::string text = kOneVertex;
  text.replace(text.find("0 0 0 255"), 9, "2.5 1.49 0.5 255");
  PointCloud c = ParsePly(Bytes(text));
  EXPECT_EQ(c.positions[0], (Position{3, 1, 1}));
  EXPECT_EQ(c.resolution_bits, 2);
}

TEST(Ply, IntegerCoordinatesAccepted) {
  std::string text =
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty int x\nproperty int y\n"
      "property int z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\n"
      "end_header\n5 6 7 1 2 3\n";
  PointCloud c = ParsePly(Bytes(text));
  EXPECT_EQ(c.positions[0], (Position{5, 6, 7}));
  EXPECT_EQ(c.resolution_bits, 3);
}

TEST(Ply, OtherElementsRejected) {
  std::string text =
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
      "property float z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\n"
      "element face 0\nproperty list uchar int vertex_indices\nend_header\n0 0 0 1 2 3\n";
  EXPECT_EQ(CodeOf([&] { ParsePly(Bytes(text)); }), ErrorCode::kUnsupportedProperty);
}

TEST(Ply, WriteDeclaresVertexCount) {
  PointCloud c = ParsePly(Bytes(kOneVertex));
  std::vector<uint8_t> out = WritePly(c, PlyFormat::kAscii);
  std::string text(out.begin(), out.end());
  EXPECT_NE(text.find("element vertex 1\n"), std::string::npos);
}

TEST(Ply, RoundTripBothFormats) {
  PointCloud c = RandomCloud(100, 10, 7);
  for (PlyFormat f : {PlyFormat::kAscii, PlyFormat::kBinaryLittleEndian}) {
    PointCloud back = ParsePly(WritePly(c, f));
    EXPECT_EQ(back, c);
    EXPECT_EQ(ParsePly(WritePly(back, f)), back);
  }
  EXPECT_EQ(ParsePly(WritePly(c, PlyFormat::kAscii)),
            ParsePly(WritePly(c, PlyFormat::kBinaryLittleEndian)));
}

TEST(Ply, EmptyCloudNotWritable) {
  PointCloud empty;
  try {
    WritePly(empty, PlyFormat::kAscii);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCloud);
    EXPECT_NE(std::string(e.what()).find("empty cloud not writable"), std::string::npos);
  }
}

TEST(Morton, KeyExamples) {
  EXPECT_EQ(MortonKey({0, 0, 0}), 0u);
  EXPECT_EQ(MortonKey({1, 1, 1}), 7u);
  EXPECT_EQ(MortonKey({1, 0, 0}), 1u);
  EXPECT_EQ(MortonKey({0, 0, 1}), 4u);
}

TEST(Morton, ThreePointOrder) {
  PointCloud c;
  c.positions = {{0, 0, 0}, {1, 1, 1}, {1, 0, 0}};
  c.colors.assign(3, Color{0, 0, 0});
  MortonPermutation p = MortonOrder(c);
  EXPECT_EQ(p.order, (std::vector<size_t>{0, 2, 1}));
}

// Bit-by-bit oracle, independent of the library's spreading code.
uint64_t BruteKey(const Position& p) {
  uint64_t key = 0;
  for (int bit = 0; bit < 21; ++bit) {
    for (int axis = 0; axis < 3; ++axis) {
      if ((p[axis] >> bit) & 1u) key |= uint64_t{1} << (3 * bit + axis);
    }
  }
  return key;
}

TEST(Morton, AgreesWithBruteForce) {
  PointCloud c = RandomCloud(1000, 21, 11);
  MortonPermutation p = MortonOrder(c);
  std::vector<size_t> sorted = p.order;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i);
  for (size_t i = 0; i < c.size(); ++i) ASSERT_EQ(p.keys[i], BruteKey(c.positions[i]));
  for (size_t j = 1; j < p.order.size(); ++j) {
    ASSERT_LE(p.keys[p.order[j - 1]], p.keys[p.order[j]]);
  }
  std::vector<size_t> inv = p.Inverse();
  for (size_t j = 0; j < p.order.size(); ++j) ASSERT_EQ(inv[p.order[j]], j);
}

TEST(Morton, StableForDuplicateKeys) {
  PointCloud c;
  c.positions = {{1, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 0, 0}};
  c.colors.assign(4, Color{0, 0, 0});
  EXPECT_EQ(MortonOrder(c).order, (std::vector<size_t>{1, 3, 0, 2}));
}

TEST(Morton, ResolutionOverflow) {
  PointCloud c;
  c.positions = {{1u << 21, 0, 0}};
  c.colors = {{0, 0, 0}};
  c.resolution_bits = 22;
  EXPECT_EQ(CodeOf([&] { MortonOrder(c); }), ErrorCode::kResolutionOverflow);
}

TEST(KdCrop, SmallCloudUnchanged) {
  PointCloud c = RandomCloud(10, 4, 1);
  EXPECT_EQ(KdTreeCrop(c, 250000, 9), c);
}

TEST(KdCrop, SplitsLargestVarianceAxisAtMedian) {
  PointCloud c;
  for (uint32_t x = 0; x < 8; ++x) {
    c.positions.push_back({x * 3, 5, 5});
    c.colors.push_back({static_cast<uint8_t>(x), 0, 0});
  }
  c.resolution_bits = MinResolutionBits(c.positions);
  for (uint64_t seed = 0; seed < 8; ++seed) {
    PointCloud out = KdTreeCrop(c, 5, seed);
    ASSERT_EQ(out.size(), 4u);
    const bool lower = out.positions[0][0] < 12;
    for (const Position& p : out.positions) EXPECT_EQ(p[0] < 12, lower);
    for (size_t i = 1; i < out.size(); ++i) EXPECT_LT(out.colors[i - 1][0], out.colors[i][0]);
  }
}

TEST(KdCrop, DeterministicPerSeed) {
  PointCloud c = RandomCloud(5000, 8, 2);
  EXPECT_EQ(KdTreeCrop(c, 300, 77), KdTreeCrop(c, 300, 77));
}

TEST(KdCrop, SizeBoundsAndOrder) {
  PointCloud c = RandomCloud(3000, 9, 4);
  for (size_t k : {2u, 3u, 17u, 100u, 1024u, 2999u, 3000u}) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      std::vector<size_t> idx = KdTreeCropIndices(c, k, seed);
      EXPECT_LT(idx.size(), k);
      EXPECT_GE(4 * idx.size(), k);
      EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
      EXPECT_EQ(std::set<size_t>(idx.begin(), idx.end()).size(), idx.size());
    }
  }
}

TEST(KdCrop, RejectsTinyK) {
  PointCloud c = RandomCloud(10, 4, 1);
  EXPECT_EQ(CodeOf([&] { KdTreeCrop(c, 1, 0); }), ErrorCode::kInvalidArgument);
}

TEST(Luma, Examples) {
  EXPECT_EQ(Luma({255, 255, 255}), 255.0);
  EXPECT_EQ(Luma({0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(Luma({255, 0, 0}), 0.2126 * 255);
  EXPECT_NEAR(Luma({255, 0, 0}), 54.213, 1e-12);
}

TEST(Luma, RangeAndMonotone) {
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    Color c = {static_cast<uint8_t>(rng.UniformInt(256)), static_cast<uint8_t>(rng.UniformInt(256)),
               static_cast<uint8_t>(rng.UniformInt(256))};
    const double y = Luma(c);
    EXPECT_GE(y, 0.0);
    EXPECT_LE(y, 255.0);
    for (int ch = 0; ch < 3; ++ch) {
      if (c[ch] == 255) continue;
      Color d = c;
      ++d[ch];
      EXPECT_GT(Luma(d), y);
    }
  }
  std::vector<Color> colors = {{1, 2, 3}, {200, 100, 50}};
  std::vector<double> ys = YChannel(colors);
  EXPECT_EQ(ys[1], Luma(colors[1]));
}

TEST(ToyData, ThousandPointsParse) {
  PointCloud c = MakeToyCloud(1000, 3);
  EXPECT_EQ(c.size(), 1000u);
  PointCloud back = ParsePly(WritePly(c, PlyFormat::kBinaryLittleEndian));
  EXPECT_EQ(back, c);
  std::set<Position> unique(c.positions.begin(), c.positions.end());
  EXPECT_EQ(unique.size(), c.size());
}

TEST(ToyData, DeterministicBytes) {
  EXPECT_EQ(WritePly(MakeToyCloud(2000, 5), PlyFormat::kAscii),
            WritePly(MakeToyCloud(2000, 5), PlyFormat::kAscii));
  EXPECT_NE(MakeToyCloud(2000, 5).colors, MakeToyCloud(2000, 6).colors);
}

TEST(ToyData, LumaHistogramIsRich) {
  PointCloud c = MakeToyCloud(50000, 1);
  std::set<int> levels;
  for (const Color& col : c.colors) levels.insert(static_cast<int>(Luma(col)));
  EXPECT_GE(levels.size(), 128u);
}

}  // namespace
}  // namespace mgpc
