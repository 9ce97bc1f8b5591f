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

#include <cmath>
#include <functional>
#include <optional>

#include <gtest/gtest.h>

#include "mgpc/codec/bitstream.h"
#include "mgpc/codec/codec.h"
#include "mgpc/common/error.h"
#include "mgpc/common/rng.h"
#include "mgpc/multigen/control_codec.h"
#include "mgpc/multigen/harness.h"
#include "mgpc/multigen/metrics.h"
#include "mgpc/multigen/trace_csv.h"
#include "mgpc/pointcloud/toy_data.h"

namespace mgpc {
namespace {

std::optional<ErrorCode> CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

GenerationTrace Trace(std::vector<double> psnr, std::string method = "m") {
  GenerationTrace t{"seq", std::move(method), "r1", {}};
  for (size_t i = 0; i < psnr.size(); ++i) {
    t.records.push_back({static_cast<int>(i) + 1, 1.5, psnr[i]});
  }
  return t;
}

PointCloud Gray(size_t n, uint8_t v) {
  PointCloud c;
  c.resolution_bits = 10;
  for (size_t i = 0; i < n; ++i) {
    c.positions.push_back({static_cast<uint32_t>(i % 1024), static_cast<uint32_t>(i / 1024), 0});
    c.colors.push_back({v, v, v});
  }
  return c;
}

// Integer sum of squared luma-numerator differences, then one division chain.
double BruteForcePsnr(const PointCloud& a, const PointCloud& b) {
  int64_t sum = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const int64_t ya = 2126 * a.colors[i][0] + 7152 * a.colors[i][1] + 722 * a.colors[i][2];
    const int64_t yb = 2126 * b.colors[i][0] + 7152 * b.colors[i][1] + 722 * b.colors[i][2];
    sum += (ya - yb) * (ya - yb);
  }
  if (sum == 0) return INFINITY;
  const double mse = static_cast<double>(sum) / 1e8 / static_cast<double>(a.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

TEST(Psnr, Examples) {
  PointCloud a = Gray(100, 10), b = Gray(100, 11);
  EXPECT_TRUE(std::isinf(PsnrY(a, a)));
  EXPECT_NEAR(PsnrY(a, b), 20.0 * std::log10(255.0), 1e-12);
  EXPECT_NEAR(PsnrY(a, b), 48.131, 5e-4);
  EXPECT_EQ(PsnrY(a, b), PsnrY(b, a));
  PointCloud moved = b;
  moved.positions[3][2] = 7;
  EXPECT_EQ(CodeOf([&] { PsnrY(a, moved); }), ErrorCode::kGeometryMismatch);
  EXPECT_EQ(CodeOf([&] { PsnrY(a, Gray(99, 10)); }), ErrorCode::kGeometryMismatch);
}

TEST(Psnr, MatchesBruteForceBitForBit) {
  Rng rng(1);
  for (size_t n : {1u, 17u, 1000u, 10000u}) {
    PointCloud a = MakeToyCloud(n, n), b = a;
    for (Color& c : b.colors) {
      for (uint8_t& v : c) v = static_cast<uint8_t>(rng.UniformInt(256));
    }
    EXPECT_EQ(PsnrY(a, b), BruteForcePsnr(a, b)) << n;
    EXPECT_EQ(PsnrY(a, b), PsnrY(b, a));
  }
}

TEST(TraceAlgebra, DeltaAndDrop) {
  GenerationTrace t = Trace({35.0, 34.0, 33.0});
  EXPECT_EQ(DeltaPsnrY(t, 2), 1.0);
  EXPECT_EQ(PsnrYDrop(t, 1), 0.0);
  EXPECT_EQ(PsnrYDrop(t, 3), 2.0);
  EXPECT_EQ(DeltaPsnrY(Trace({30, 30, 30}), 3), 0.0);
  EXPECT_NEAR(DeltaPsnrY(Trace({30.5, 30.5 - 0.1733}), 2), 0.1733, 1e-12);
  EXPECT_EQ(CodeOf([&] { DeltaPsnrY(t, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { PsnrYDrop(t, 4); }), ErrorCode::kInvalidArgument);
  GenerationTrace lossless = Trace({INFINITY, INFINITY});
  EXPECT_EQ(PsnrYDrop(lossless, 2), 0.0);
  EXPECT_EQ(DeltaPsnrY(lossless, 2), 0.0);
}

TEST(TraceAlgebra, TelescopingIdentity) {
  // Dyadic values make every difference and partial sum exact.
  GenerationTrace dyadic = Trace({40.0, 39.5, 39.25, 39.125, 38.0, 37.75});
  for (int k = 2; k <= 6; ++k) {
    double sum = 0.0;
    for (int j = 2; j <= k; ++j) sum += DeltaPsnrY(dyadic, j);
    EXPECT_EQ(PsnrYDrop(dyadic, k), sum);
  }
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v = {20.0 + 20.0 * rng.Uniform()};
    for (int k = 2; k <= 30; ++k) v.push_back(v.back() - rng.Uniform());
    GenerationTrace t = Trace(v);
    double sum = 0.0;
    for (int k = 2; k <= 30; ++k) {
      sum += DeltaPsnrY(t, k);
      ASSERT_NEAR(PsnrYDrop(t, k), sum, 1e-12);
    }
  }
}

TEST(DropConvergence, Values) {
  EXPECT_EQ(DropConvergenceRate(2.5, 2.5).value, 0.0);
  EXPECT_NEAR(DropConvergenceRate(3.0 / std::exp(1.0), 3.0).value, -1.0, 1e-12);
  EXPECT_EQ(DropConvergenceRate(0.0, 3.0).kind, DropConvergence::Kind::kConverged);
  EXPECT_EQ(DropConvergenceRate(-0.1, 3.0).kind, DropConvergence::Kind::kUndefined);
  EXPECT_EQ(DropConvergenceRate(0.1, 0.0).kind, DropConvergence::Kind::kUndefined);
  EXPECT_EQ(DropConvergenceText(DropConvergenceRate(0.0, 1.0)), "converged");
  EXPECT_EQ(DropConvergenceText(DropConvergenceRate(-1.0, 1.0)), "undefined");
  EXPECT_EQ(DropConvergenceText(DropConvergenceRate(1.0, 1.0)), "0");
}

TEST(DropConvergence, MaxDropOverAllTraces) {
  std::vector<GenerationTrace> ts = {Trace({30, 29, 28.5}), Trace({31, 27, 29})};
  EXPECT_EQ(MaxDrop(ts), 4.0);
}

TEST(Control, FiftyGenerationsAreExact) {
  PointCloud c = MakeToyCloud(10000, 3);
  auto control = MakeIdempotentControl();
  std::vector<std::vector<Color>> colors;
  GenerationTrace t = RunMultigen(c, *control, 50, {"toy", "control", "-"},
                                  [&](int, const PointCloud& x) { colors.push_back(x.colors); });
  ASSERT_EQ(t.records.size(), 50u);
  ASSERT_EQ(colors.size(), 50u);
  for (int k = 1; k <= 50; ++k) {
    EXPECT_EQ(colors[k - 1], colors[0]);
    EXPECT_EQ(PsnrYDrop(t, k), 0.0);
    EXPECT_TRUE(std::isinf(t.records[k - 1].psnr_y));
  }
  EXPECT_EQ(colors[0], c.colors);
  // Three uniform 8-bit channels plus header and flush bytes.
  EXPECT_GE(t.records[0].bpp, 24.0);
  EXPECT_LE(t.records[0].bpp, 24.0 + 8.0 * (kBitstreamHeaderBytes + 8) / 10000.0);
}

TEST(Harness, SingleGenerationAndGeometry) {
  PointCloud c = MakeToyCloud(2000, 4);
  LearnedCodec codec(MakeRandomModel(4));
  GenerationTrace one = RunMultigen(c, codec, 1);
  ASSERT_EQ(one.records.size(), 1u);
  EXPECT_EQ(one.records[0].k, 1);
  EXPECT_EQ(CodeOf([&] { DeltaPsnrY(one, 1); }), ErrorCode::kInvalidArgument);

  RunMultigen(c, codec, 4, {}, [&](int k, const PointCloud& x) {
    EXPECT_EQ(x.positions, c.positions) << k;
    EXPECT_EQ(x.resolution_bits, c.resolution_bits);
  });
  EXPECT_EQ(CodeOf([&] { RunMultigen(c, codec, 0); }), ErrorCode::kInvalidArgument);
}

class FailingCodec : public Codec {
 public:
  std::string name() const override { return "failing"; }
  Bitstream Compress(const PointCloud& cloud) const override {
    if (++calls_ == 3) throw Error(ErrorCode::kNonFinite, "boom");
    return inner_.Compress(cloud);
  }
  PointCloud Decompress(const Bitstream& s, const PointCloud& g) const override {
    return inner_.Decompress(s, g);
  }

 private:
  ControlCodec inner_;
  mutable int calls_ = 0;
};

TEST(Harness, ErrorsNameTheGeneration) {
  PointCloud c = MakeToyCloud(500, 5);
  FailingCodec codec;
  try {
    RunMultigen(c, codec, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
    EXPECT_NE(std::string(e.what()).find("generation 3"), std::string::npos) << e.what();
  }
}

TEST(TraceCsv, RoundTripAndColumns) {
  std::vector<GenerationTrace> ts = {Trace({31.25, 30.1, 29.7}, "base"),
                                     Trace({INFINITY, INFINITY}, "control"),
                                     Trace({28.0, 28.5, 28.5}, "lcc")};
  const double max_drop = MaxDrop(ts);
  std::string csv = FormatTraceCsv(ts, max_drop);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTraceCsvHeader);
  EXPECT_NE(csv.find("seq,base,r1,1,1.5,31.25,,0,,0\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("seq,control,r1,2,1.5,99.99,0,0,converged,1\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("seq,lcc,r1,2,1.5,28.5,-0.5,-0.5,undefined,0\n"), std::string::npos) << csv;
  EXPECT_EQ(csv.find("inf"), std::string::npos);

  std::vector<GenerationTrace> back = ParseTraceCsv(csv);
  ASSERT_EQ(back.size(), ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    EXPECT_EQ(back[i].method, ts[i].method);
    ASSERT_EQ(back[i].records.size(), ts[i].records.size());
    for (size_t k = 0; k < ts[i].records.size(); ++k) {
      EXPECT_EQ(back[i].records[k].psnr_y, ts[i].records[k].psnr_y);
      EXPECT_EQ(back[i].records[k].bpp, ts[i].records[k].bpp);
    }
  }
  EXPECT_EQ(FormatTraceCsv(back, max_drop), csv);
}

TEST(TraceCsv, ShortestRoundTripNumbers) {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const double v = 100.0 * rng.Uniform();
    EXPECT_EQ(std::stod(FormatReal(v)), v);
  }
  EXPECT_EQ(FormatReal(0.1), "0.1");
}

TEST(TraceCsv, ParseErrors) {
  EXPECT_EQ(CodeOf([] { ParseTraceCsv("a,b\n"); }), ErrorCode::kMalformedHeader);
  EXPECT_EQ(CodeOf([] { ParseTraceCsv(""); }), ErrorCode::kMalformedHeader);
  std::string bad = std::string(kTraceCsvHeader) + "\nseq,m,r,2,1,30,,0,,0\n";
  EXPECT_EQ(CodeOf([&] { ParseTraceCsv(bad); }), ErrorCode::kCorruptStream);
}

TEST(Tables, FirstVsLastAndDelta) {
  std::vector<GenerationTrace> ts = {Trace({31.0, 30.0, 29.5}, "base"),
                                     Trace({33.0, 31.0, 30.0}, "base"),
                                     Trace({30.0, 29.75}, "lcc")};
  std::string first_last = FormatFirstVsLastTable(ts);
  EXPECT_NE(first_last.find("seq,base,r1,3,1.5000,31.0000,1.5000,29.5000,1.5000\n"),
            std::string::npos)
      << first_last;
  std::vector<int> ks = {2, 3};
  std::string delta = FormatDeltaTable(ts, ks);
  EXPECT_NE(delta.find("base,2,1.5000,0.7500\n"), std::string::npos) << delta;
  EXPECT_NE(delta.find("lcc,1,0.2500,\n"), std::string::npos) << delta;
}

TEST(Report, DataFiles) {
  std::vector<GenerationTrace> ts = {Trace({31.0, 30.0, 29.5}, "base"),
                                     Trace({33.0, 31.0, 30.0}, "base"),
                                     Trace({30.0, 30.0}, "lcc")};
  ReportFiles r = BuildReport(ts);
  EXPECT_EQ(r.aggregate_csv, FormatTraceCsv(ts, 3.0));
  ASSERT_EQ(r.data_files.size(), 3u);
  EXPECT_EQ(r.data_files[0].first, "base.dat");
  // k = 2: mean psnr 30.5, mean drop 1.5, mean delta 1.5, mean ln(delta / 3).
  const std::string& base = r.data_files[0].second;
  const std::string row2 = "2 1.5 30.5 1.5 1.5 " + FormatReal((std::log(1.0 / 3) + std::log(2.0 / 3)) / 2) + "\n";
  EXPECT_NE(base.find(row2), std::string::npos) << base;
  EXPECT_NE(base.find("1 1.5 32 0 NaN NaN\n"), std::string::npos) << base;
  EXPECT_EQ(r.data_files[2].first, "drop_convergence.dat");
  EXPECT_NE(r.data_files[2].second.find("lcc NaN 0\n"), std::string::npos);
  EXPECT_EQ(CodeOf([] { BuildReport({}); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace mgpc
