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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mgpc/cli/cli.h"
#include "mgpc/common/bytes.h"
#include "mgpc/multigen/trace_csv.h"
#include "mgpc/pointcloud/ply.h"

namespace mgpc::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mgpc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(std::vector<std::string> args) {
    args.insert(args.begin(), "mgpc");
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }
  fs::path P(const std::string& name) const { return dir_ / name; }
  void WriteText(const std::string& name, const std::string& text) const {
    std::ofstream(P(name)) << text;
  }
  std::string ReadText(const std::string& name) const {
    std::vector<uint8_t> b = ReadFileBytes(P(name));
    return std::string(b.begin(), b.end());
  }
  // A tiny training config next to a toy cloud.
  void WriteTinyTraining(int epochs) {
    ASSERT_EQ(Run({"make-toy-data", P("toy.ply").string(), "--points", "1500", "--seed", "4"}),
              kExitOk);
    WriteText("t.cfg", "data = toy.ply\ncheckpoint = m.ckpt\nlog = m.csv\nepochs = " +
                           std::to_string(epochs) +
                           "\ncrop_points = 800\nbatch_size = 1\nhidden_channels = 8\n"
                           "latent_channels = 4\nhyper_channels = 2\nlambda = 1000\n");
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, HelpAndUsageExitCodes) {
  EXPECT_EQ(Run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("multigen"), std::string::npos);
  EXPECT_EQ(Run({}), kExitUsage);
  EXPECT_EQ(Run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(Run({"compress", "x.ply"}), kExitUsage);
  EXPECT_EQ(Run({"multigen", "p", "--jobs", "0"}), kExitUsage);
}

TEST_F(CliTest, MissingInputsAreUsageErrors) {
  EXPECT_EQ(Run({"compress", P("none.ply").string(), "--model", "control", "-o",
                 P("c.bin").string()}),
            kExitUsage);
  EXPECT_NE(err_.str().find("not found"), std::string::npos);
  EXPECT_EQ(Run({"train", P("none.cfg").string()}), kExitUsage);
  EXPECT_EQ(Run({"report", P("none").string(), "-o", P("rep").string()}), kExitUsage);
  fs::create_directories(P("empty"));
  EXPECT_EQ(Run({"report", P("empty").string(), "-o", P("rep").string()}), kExitUsage);
}

TEST_F(CliTest, ControlRoundTripIsLossless) {
  ASSERT_EQ(Run({"make-toy-data", P("toy.ply").string(), "--points", "2000", "--ascii"}),
            kExitOk);
  ASSERT_EQ(Run({"compress", P("toy.ply").string(), "--model", "control", "-o",
                 P("c.bin").string()}),
            kExitOk);
  EXPECT_NE(out_.str().find("bpp"), std::string::npos);
  ASSERT_EQ(Run({"decompress", P("c.bin").string(), "--geometry", P("toy.ply").string(),
                 "--model", "control", "-o", P("d.ply").string()}),
            kExitOk);
  PointCloud a = ReadPlyFile(P("toy.ply"));
  PointCloud b = ReadPlyFile(P("d.ply"));
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a.positions[i], b.positions[i]);
    ASSERT_EQ(a.colors[i], b.colors[i]);
  }
}

TEST_F(CliTest, CorruptStreamIsRuntimeFailure) {
  ASSERT_EQ(Run({"make-toy-data", P("toy.ply").string(), "--points", "500"}), kExitOk);
  WriteText("bad.bin", "not a bitstream");
  EXPECT_EQ(Run({"decompress", P("bad.bin").string(), "--geometry", P("toy.ply").string(),
                 "--model", "control", "-o", P("d.ply").string()}),
            kExitFailure);
}

TEST_F(CliTest, TrainWritesCheckpointAndLogThenResumes) {
  WriteTinyTraining(1);
  ASSERT_EQ(Run({"train", P("t.cfg").string()}), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(P("m.ckpt")));
  EXPECT_EQ(ReadText("m.csv").substr(0, 6), "epoch,");
  EXPECT_FALSE(fs::exists(P("m.ckpt.tmp")));

  WriteTinyTraining(2);
  ASSERT_EQ(Run({"train", P("t.cfg").string(), "--resume", P("m.ckpt").string()}), kExitOk);
  EXPECT_NE(out_.str().find("epoch 2"), std::string::npos);
  EXPECT_EQ(out_.str().find("epoch 1 "), std::string::npos);
  std::string log = ReadText("m.csv");
  EXPECT_NE(log.find("\n2,"), std::string::npos);

  ASSERT_EQ(Run({"compress", P("toy.ply").string(), "--model", P("m.ckpt").string(), "-o",
                 P("l.bin").string()}),
            kExitOk);
  ASSERT_EQ(Run({"decompress", P("l.bin").string(), "--geometry", P("toy.ply").string(),
                 "--model", P("m.ckpt").string(), "-o", P("l.ply").string()}),
            kExitOk);
  EXPECT_EQ(err_.str(), "");
}

TEST_F(CliTest, TrainRejectsBadConfigs) {
  WriteTinyTraining(1);
  WriteText("u.cfg", ReadText("t.cfg") + "bogus = 1\n");
  EXPECT_EQ(Run({"train", P("u.cfg").string()}), kExitUsage);
  EXPECT_NE(err_.str().find("bogus"), std::string::npos);
  WriteText("v.cfg", ReadText("t.cfg") + "epochs = -3\n");
  EXPECT_EQ(Run({"train", P("v.cfg").string()}), kExitUsage);
  WriteText("w.cfg", "checkpoint = m.ckpt\nlog = m.csv\n");
  EXPECT_EQ(Run({"train", P("w.cfg").string()}), kExitUsage);
  EXPECT_FALSE(fs::exists(P("m.ckpt")));
}

TEST(PlanTest, ParsesCellsWithDefaults) {
  ExperimentPlan plan = ParsePlan(
      "output_dir = out\njobs = 3\n"
      "cell.b.input = clouds/seq.ply\ncell.b.codec = control\ncell.b.method = control\n"
      "cell.b.lambda_id = 255\ncell.b.generations = 4\n"
      "cell.a.input = /abs/x.ply\ncell.a.codec = m.ckpt\ncell.a.method = LCC\n"
      "cell.a.lambda_id = 2\ncell.a.generations = 10\ncell.a.sequence = s\n"
      "cell.a.rate_point = low\n",
      "/base");
  EXPECT_EQ(plan.output_dir, fs::path("/base/out"));
  EXPECT_EQ(plan.jobs, 3);
  ASSERT_EQ(plan.cells.size(), 2u);
  EXPECT_EQ(plan.cells[0].label, "a");
  EXPECT_EQ(plan.cells[0].input, fs::path("/abs/x.ply"));
  EXPECT_EQ(plan.cells[0].codec, "/base/m.ckpt");
  EXPECT_EQ(plan.cells[0].sequence, "s");
  EXPECT_EQ(plan.cells[0].rate_point, "low");
  EXPECT_EQ(plan.cells[1].codec, "control");
  EXPECT_EQ(plan.cells[1].sequence, "seq");
  EXPECT_EQ(plan.cells[1].rate_point, "r255");
  EXPECT_EQ(plan.cells[1].generations, 4);
}

TEST(PlanTest, RejectsBadPlans) {
  const std::string cell =
      "cell.a.input = x.ply\ncell.a.codec = control\ncell.a.method = m\n"
      "cell.a.lambda_id = 1\ncell.a.generations = 2\n";
  EXPECT_THROW(ParsePlan(cell, ""), UsageError);  // no output_dir
  EXPECT_THROW(ParsePlan("output_dir = o\n", ""), UsageError);
  EXPECT_THROW(ParsePlan("output_dir = o\ncolour = red\n" + cell, ""), UsageError);
  EXPECT_THROW(ParsePlan("output_dir = o\ncell.a.extra = 1\n" + cell, ""), UsageError);
  EXPECT_THROW(ParsePlan("output_dir = o\njobs = 0\n" + cell, ""), UsageError);
  EXPECT_THROW(ParsePlan("output_dir = o\ncell.a.input = x.ply\n", ""), UsageError);
  std::string zero = cell;
  zero.replace(zero.find("generations = 2"), 15, "generations = 0");
  EXPECT_THROW(ParsePlan("output_dir = o\n" + zero, ""), UsageError);
  EXPECT_NO_THROW(ParsePlan("output_dir = o\n" + cell, ""));
  EXPECT_THROW(ValidatePlan(ParsePlan("output_dir = o\n" + cell, "/nonexistent")), UsageError);
}

TEST_F(CliTest, MultigenWritesTracesAndSummaries) {
  ASSERT_EQ(Run({"make-toy-data", P("toy.ply").string(), "--points", "1000"}), kExitOk);
  WriteText("p.plan",
            "output_dir = out\njobs = 2\n"
            "cell.a.input = toy.ply\ncell.a.codec = control\ncell.a.method = control\n"
            "cell.a.lambda_id = 255\ncell.a.generations = 6\n"
            "cell.b.input = toy.ply\ncell.b.codec = control\ncell.b.method = control\n"
            "cell.b.lambda_id = 7\ncell.b.generations = 3\ncell.b.rate_point = other\n");
  ASSERT_EQ(Run({"multigen", P("p.plan").string()}), kExitOk) << err_.str();
  EXPECT_NE(err_.str().find("cell b: lambda_id"), std::string::npos);
  EXPECT_EQ(err_.str().find("cell a"), std::string::npos);

  std::vector<GenerationTrace> a = ParseTraceCsv(ReadText("out/traces/a.csv"));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].records.size(), 6u);
  EXPECT_EQ(a[0].rate_point, "r255");
  EXPECT_EQ(ParseTraceCsv(ReadText("out/traces/b.csv"))[0].rate_point, "other");

  std::string delta = ReadText("out/summary/delta_psnr_y.csv");
  EXPECT_EQ(delta.substr(0, delta.find('\n')),
            "method,traces,delta_psnr_y_k2,delta_psnr_y_k5");
  EXPECT_NE(delta.find("control,2,0.0000,0.0000"), std::string::npos);
  std::string first = ReadText("out/summary/first_vs_last.csv");
  EXPECT_NE(first.find("toy,control,r255,6,"), std::string::npos);

  // Same plan, different parallelism: identical bytes.
  std::string before = ReadText("out/traces/a.csv") + ReadText("out/traces/b.csv");
  ASSERT_EQ(Run({"multigen", P("p.plan").string(), "--jobs", "1"}), kExitOk);
  EXPECT_EQ(ReadText("out/traces/a.csv") + ReadText("out/traces/b.csv"), before);

  ASSERT_EQ(Run({"report", P("out/traces").string(), "-o", P("rep").string()}), kExitOk);
  EXPECT_TRUE(fs::exists(P("rep/aggregate.csv")));
  EXPECT_TRUE(fs::exists(P("rep/control.dat")));
  EXPECT_TRUE(fs::exists(P("rep/drop_convergence.dat")));
}

TEST_F(CliTest, MultigenValidatesBeforeRunning) {
  ASSERT_EQ(Run({"make-toy-data", P("toy.ply").string(), "--points", "500"}), kExitOk);
  WriteText("p.plan",
            "output_dir = out\n"
            "cell.a.input = toy.ply\ncell.a.codec = control\ncell.a.method = control\n"
            "cell.a.lambda_id = 255\ncell.a.generations = 2\n"
            "cell.b.input = toy.ply\ncell.b.codec = missing.ckpt\ncell.b.method = LCC\n"
            "cell.b.lambda_id = 1\ncell.b.generations = 2\n");
  EXPECT_EQ(Run({"multigen", P("p.plan").string()}), kExitUsage);
  EXPECT_FALSE(fs::exists(P("out")));
}

}  // namespace
}  // namespace mgpc::cli
