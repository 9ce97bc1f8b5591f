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

#include "mgpc/cli/cli.h"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "mgpc/codec/bitstream.h"
#include "mgpc/codec/codec.h"
#include "mgpc/common/bytes.h"
#include "mgpc/common/error.h"
#include "mgpc/common/key_value.h"
#include "mgpc/multigen/control_codec.h"
#include "mgpc/multigen/harness.h"
#include "mgpc/multigen/metrics.h"
#include "mgpc/multigen/trace_csv.h"
#include "mgpc/pointcloud/ply.h"
#include "mgpc/pointcloud/toy_data.h"
#include "mgpc/tensor/checkpoint.h"
#include "mgpc/training/trainer.h"

namespace mgpc::cli {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kControlTag = "control";
constexpr int kSummaryKs[] = {2, 5, 10, 25, 50};

fs::path Resolve(const fs::path& base, std::string_view value) {
  fs::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

void RequireFile(const fs::path& path, const std::string& what) {
  if (!fs::is_regular_file(path)) throw UsageError(what + " not found: " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::vector<uint8_t> bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

// Config and plan syntax errors are the user's to fix.
KeyValueList ParseSettings(std::string_view text, const std::string& source) {
  try {
    return ParseKeyValue(text);
  } catch (const Error& e) {
    throw UsageError(source + ": " + e.what());
  }
}

struct LoadedCodec {
  std::unique_ptr<Codec> codec;
  uint8_t lambda_id = 0;
};

LoadedCodec LoadCodec(const std::string& spec) {
  if (spec == kControlTag) return {MakeIdempotentControl(), kLambdaControl};
  CodecModel model = ModelFromEntries(tensor::LoadCheckpoint(spec));
  const uint8_t id = model.lambda_id;
  return {std::make_unique<LearnedCodec>(std::move(model)), id};
}

void WarnOnLambdaMismatch(std::ostream& err, const std::string& context, int expected,
                          int actual) {
  if (expected != actual) {
    err << "warning: " << context << ": lambda_id " << actual << " differs from expected "
        << expected << "\n";
  }
}

// ---- make-toy-data -------------------------------------------------------

int MakeToyData(const fs::path& output, size_t points, uint64_t seed, bool ascii,
                std::ostream& out) {
  if (points == 0) throw UsageError("--points must be positive");
  PointCloud cloud = MakeToyCloud(points, seed);
  WriteFileAtomic(output,
                  WritePly(cloud, ascii ? PlyFormat::kAscii : PlyFormat::kBinaryLittleEndian));
  out << "wrote " << cloud.size() << " points to " << output.string() << "\n";
  return kExitOk;
}

// ---- train ---------------------------------------------------------------

struct TrainJob {
  TrainConfig config;
  std::vector<fs::path> data;
  fs::path checkpoint;
  fs::path log;
};

std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> items;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    std::string_view item = s.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) items.emplace_back(item);
    start = comma + 1;
  }
  return items;
}

TrainJob ParseTrainJob(const fs::path& config_path) {
  RequireFile(config_path, "training config");
  const fs::path base = config_path.parent_path();
  TrainJob job;
  bool alpha_explicit = false;
  for (const auto& [key, value] : ParseSettings(ReadText(config_path), config_path.string())) {
    if (key == "data") {
      for (const std::string& item : SplitList(value)) job.data.push_back(Resolve(base, item));
    } else if (key == "checkpoint") {
      job.checkpoint = Resolve(base, value);
    } else if (key == "log") {
      job.log = Resolve(base, value);
    } else {
      bool known = false;
      try {
        known = ApplyTrainSetting(job.config, key, value, &alpha_explicit);
      } catch (const Error& e) {
        throw UsageError(config_path.string() + ": " + e.what());
      }
      if (!known) throw UsageError(config_path.string() + ": unknown key '" + key + "'");
    }
  }
  if (job.data.empty()) throw UsageError(config_path.string() + ": 'data' is required");
  if (job.checkpoint.empty()) {
    throw UsageError(config_path.string() + ": 'checkpoint' is required");
  }
  if (job.log.empty()) throw UsageError(config_path.string() + ": 'log' is required");
  try {
    ValidateTrainConfig(job.config);
  } catch (const Error& e) {
    throw UsageError(config_path.string() + ": " + e.what());
  }
  for (const fs::path& p : job.data) RequireFile(p, "training cloud");
  return job;
}

int TrainCommand(const fs::path& config_path, const std::optional<fs::path>& resume,
                 std::ostream& out) {
  TrainJob job = ParseTrainJob(config_path);
  if (resume) RequireFile(*resume, "resume checkpoint");

  std::vector<PointCloud> dataset;
  for (const fs::path& p : job.data) dataset.push_back(ReadPlyFile(p));

  TrainState state;
  if (resume) {
    state = TrainStateFromEntries(tensor::LoadCheckpoint(*resume));
    if (!(state.model.config == job.config.model)) {
      throw UsageError("resume checkpoint has different channel widths than the config");
    }
  } else {
    state = InitTrainState(job.config);
  }

  auto save = [&](const TrainState& s) {
    tensor::SaveCheckpoint(job.checkpoint, TrainStateToEntries(s));
    WriteFileAtomic(job.log, FormatTrainLog(s.log));
  };
  Train(state, dataset, job.config, [&](const TrainState& s) {
    const EpochLog& e = s.log.back();
    out << "epoch " << e.epoch << " lr " << FormatReal(e.lr) << " total " << FormatReal(e.total)
        << "\n";
    save(s);
  });
  save(state);
  out << "checkpoint " << job.checkpoint.string() << "\n";
  return kExitOk;
}

// ---- compress / decompress -----------------------------------------------

int CompressCommand(const fs::path& input, const std::string& model, const fs::path& output,
                    std::ostream& out) {
  RequireFile(input, "input cloud");
  if (model != kControlTag) RequireFile(model, "model checkpoint");
  PointCloud cloud = ReadPlyFile(input);
  LoadedCodec codec = LoadCodec(model);
  std::vector<uint8_t> bytes = codec.codec->Compress(cloud).Serialize();
  WriteFileAtomic(output, bytes);
  out << "points " << cloud.size() << " bytes " << bytes.size() << " bpp "
      << FormatReal(BitsPerPoint(bytes.size(), cloud.size())) << "\n";
  return kExitOk;
}

int DecompressCommand(const fs::path& stream_path, const fs::path& geometry,
                      const std::string& model, const fs::path& output, bool ascii,
                      std::ostream& out, std::ostream& err) {
  RequireFile(stream_path, "bitstream");
  RequireFile(geometry, "geometry cloud");
  if (model != kControlTag) RequireFile(model, "model checkpoint");
  Bitstream stream = Bitstream::Parse(ReadFileBytes(stream_path));
  LoadedCodec codec = LoadCodec(model);
  WarnOnLambdaMismatch(err, "bitstream " + stream_path.string(), codec.lambda_id,
                       stream.header.lambda_id);
  PointCloud cloud = codec.codec->Decompress(stream, ReadPlyFile(geometry));
  WriteFileAtomic(output,
                  WritePly(cloud, ascii ? PlyFormat::kAscii : PlyFormat::kBinaryLittleEndian));
  out << "points " << cloud.size() << " written to " << output.string() << "\n";
  return kExitOk;
}

// ---- multigen ------------------------------------------------------------

std::vector<GenerationTrace> ReadTraceDir(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no trace CSV files in " + dir.string());
  std::vector<GenerationTrace> traces;
  for (const fs::path& f : files) {
    for (GenerationTrace& t : ParseTraceCsv(ReadText(f))) traces.push_back(std::move(t));
  }
  return traces;
}

int MultigenCommand(const fs::path& plan_path, std::optional<int> jobs_flag, std::ostream& out,
                    std::ostream& err) {
  RequireFile(plan_path, "plan");
  ExperimentPlan plan = ParsePlan(ReadText(plan_path), plan_path.parent_path());
  ValidatePlan(plan);
  const int jobs = std::max(1, jobs_flag.value_or(plan.jobs));

  const size_t n = plan.cells.size();
  std::vector<GenerationTrace> traces(n);
  std::vector<std::string> failures(n);
  std::mutex io;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      const PlanCell& cell = plan.cells[i];
      try {
        PointCloud cloud = ReadPlyFile(cell.input);
        LoadedCodec codec = LoadCodec(cell.codec);
        {
          std::lock_guard<std::mutex> lock(io);
          WarnOnLambdaMismatch(err, "cell " + cell.label, cell.lambda_id, codec.lambda_id);
        }
        traces[i] = RunMultigen(cloud, *codec.codec, cell.generations,
                                {cell.sequence, cell.method, cell.rate_point});
        std::lock_guard<std::mutex> lock(io);
        const GenerationTrace& t = traces[i];
        out << "cell " << cell.label << ": bpp_1 " << FormatReal(t.records.front().bpp)
            << " psnr_y_1 " << FormatReal(std::min(t.records.front().psnr_y, kPsnrCap))
            << " drop_" << cell.generations << " "
            << FormatReal(PsnrYDrop(CappedTrace(t), cell.generations)) << "\n";
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::min<int>(jobs, static_cast<int>(n)); ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  bool failed = false;
  for (size_t i = 0; i < n; ++i) {
    if (!failures[i].empty()) {
      err << "error: cell " << plan.cells[i].label << ": " << failures[i] << "\n";
      failed = true;
    }
  }
  if (failed) return kExitFailure;

  std::vector<GenerationTrace> capped;
  for (const GenerationTrace& t : traces) capped.push_back(CappedTrace(t));
  const double max_drop = MaxDrop(capped);
  const fs::path trace_dir = plan.output_dir / "traces";
  const fs::path summary_dir = plan.output_dir / "summary";
  fs::create_directories(trace_dir);
  fs::create_directories(summary_dir);
  for (size_t i = 0; i < n; ++i) {
    WriteFileAtomic(trace_dir / (plan.cells[i].label + ".csv"),
                    FormatTraceCsv(std::span(&traces[i], 1), max_drop));
  }

  // Summaries are computed from the CSVs as written, not from memory.
  std::vector<GenerationTrace> reread = ReadTraceDir(trace_dir);
  int longest = 0;
  for (const GenerationTrace& t : reread) longest = std::max<int>(longest, t.records.size());
  std::vector<int> ks;
  for (int k : kSummaryKs) {
    if (k <= longest) ks.push_back(k);
  }
  WriteFileAtomic(summary_dir / "first_vs_last.csv", FormatFirstVsLastTable(reread));
  WriteFileAtomic(summary_dir / "delta_psnr_y.csv", FormatDeltaTable(reread, ks));
  out << "traces in " << trace_dir.string() << ", summaries in " << summary_dir.string() << "\n";
  return kExitOk;
}

// ---- report --------------------------------------------------------------

int ReportCommand(const fs::path& trace_dir, const fs::path& output_dir, std::ostream& out) {
  if (!fs::is_directory(trace_dir)) throw UsageError("not a directory: " + trace_dir.string());
  ReportFiles files = BuildReport(ReadTraceDir(trace_dir));
  fs::create_directories(output_dir);
  WriteFileAtomic(output_dir / "aggregate.csv", files.aggregate_csv);
  for (const auto& [name, text] : files.data_files) WriteFileAtomic(output_dir / name, text);
  out << "report in " << output_dir.string() << "\n";
  return kExitOk;
}

int ParseCount(const std::string& key, const std::string& value, int min) {
  int64_t v;
  try {
    v = ParseInt(key, value);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (v < min || v > 1000000) {
    throw UsageError(key + " must be at least " + std::to_string(min));
  }
  return static_cast<int>(v);
}

}  // namespace

ExperimentPlan ParsePlan(std::string_view text, const fs::path& base_dir) {
  ExperimentPlan plan;
  std::map<std::string, std::map<std::string, std::string>> cells;
  for (const auto& [key, value] : ParseSettings(text, "plan")) {
    if (key == "output_dir") {
      plan.output_dir = Resolve(base_dir, value);
    } else if (key == "jobs") {
      plan.jobs = ParseCount(key, value, 1);
    } else if (key.rfind("cell.", 0) == 0) {
      const size_t dot = key.rfind('.');
      if (dot <= 5) throw UsageError("plan: malformed cell key '" + key + "'");
      cells[key.substr(5, dot - 5)][key.substr(dot + 1)] = value;
    } else {
      throw UsageError("plan: unknown key '" + key + "'");
    }
  }
  if (plan.output_dir.empty()) throw UsageError("plan: 'output_dir' is required");
  if (cells.empty()) throw UsageError("plan: no cells");

  for (auto& [label, fields] : cells) {
    if (label.find_first_of("/\\,") != std::string::npos) {
      throw UsageError("plan: cell label '" + label + "' contains a path or list separator");
    }
    auto take = [&](const std::string& name, bool required) -> std::string {
      auto it = fields.find(name);
      if (it == fields.end()) {
        if (required) throw UsageError("plan: cell '" + label + "' lacks '" + name + "'");
        return "";
      }
      std::string v = it->second;
      fields.erase(it);
      return v;
    };
    PlanCell cell;
    cell.label = label;
    cell.input = Resolve(base_dir, take("input", true));
    cell.codec = take("codec", true);
    if (cell.codec != kControlTag) cell.codec = Resolve(base_dir, cell.codec).string();
    cell.method = take("method", true);
    cell.lambda_id = ParseCount("cell." + label + ".lambda_id", take("lambda_id", true), 0);
    if (cell.lambda_id > 255) throw UsageError("plan: lambda_id of '" + label + "' exceeds 255");
    cell.generations = ParseCount("cell." + label + ".generations", take("generations", true), 1);
    cell.sequence = take("sequence", false);
    if (cell.sequence.empty()) cell.sequence = cell.input.stem().string();
    cell.rate_point = take("rate_point", false);
    if (cell.rate_point.empty()) cell.rate_point = "r" + std::to_string(cell.lambda_id);
    if (!fields.empty()) {
      throw UsageError("plan: cell '" + label + "' has unknown field '" + fields.begin()->first +
                       "'");
    }
    plan.cells.push_back(std::move(cell));
  }
  return plan;
}

void ValidatePlan(const ExperimentPlan& plan) {
  for (const PlanCell& cell : plan.cells) {
    RequireFile(cell.input, "cell " + cell.label + " input");
    if (cell.codec != kControlTag) RequireFile(cell.codec, "cell " + cell.label + " checkpoint");
  }
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-generation point cloud attribute compression"};
  app.name(args.empty() ? "mgpc" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  std::string output, input, model, geometry, plan, trace_dir, config;
  size_t points = 50000;
  uint64_t seed = 1;
  bool ascii = false;
  int jobs = 0;

  CLI::App* toy = app.add_subcommand("make-toy-data", "Write a synthetic voxelized test cloud");
  toy->add_option("output", output, "Output PLY path")->required();
  toy->add_option("--points", points, "Number of points")->capture_default_str();
  toy->add_option("--seed", seed, "Random seed")->capture_default_str();
  toy->add_flag("--ascii", ascii, "Write ASCII instead of binary PLY");

  std::string resume;
  CLI::App* train = app.add_subcommand("train", "Train a codec from a key = value config");
  train->add_option("config", config, "Training config file")->required();
  train->add_option("--resume", resume, "Continue from a training checkpoint");

  CLI::App* compress = app.add_subcommand("compress", "Compress the attributes of a PLY cloud");
  compress->add_option("input", input, "Input PLY")->required();
  compress->add_option("--model", model, "Checkpoint, or 'control'")->required();
  compress->add_option("-o,--output", output, "Output bitstream")->required();

  CLI::App* decompress = app.add_subcommand("decompress", "Decode a bitstream onto geometry");
  decompress->add_option("input", input, "Bitstream")->required();
  decompress->add_option("--geometry", geometry, "PLY supplying the positions")->required();
  decompress->add_option("--model", model, "Checkpoint, or 'control'")->required();
  decompress->add_option("-o,--output", output, "Output PLY")->required();
  decompress->add_flag("--ascii", ascii, "Write ASCII instead of binary PLY");

  CLI::App* multigen = app.add_subcommand("multigen", "Run a multi-generation experiment plan");
  multigen->add_option("plan", plan, "Plan file")->required();
  multigen->add_option("--jobs", jobs, "Cells run in parallel (overrides the plan)")
      ->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand("report", "Aggregate trace CSVs into plot data");
  report->add_option("traces", trace_dir, "Directory of trace CSV files")->required();
  report->add_option("-o,--output", output, "Output directory")->required();

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (toy->parsed()) return MakeToyData(output, points, seed, ascii, out);
    if (train->parsed()) {
      return TrainCommand(config, resume.empty() ? std::nullopt : std::optional<fs::path>(resume),
                          out);
    }
    if (compress->parsed()) return CompressCommand(input, model, output, out);
    if (decompress->parsed()) {
      return DecompressCommand(input, geometry, model, output, ascii, out, err);
    }
    if (multigen->parsed()) {
      return MultigenCommand(plan, jobs > 0 ? std::optional<int>(jobs) : std::nullopt, out, err);
    }
    if (report->parsed()) return ReportCommand(trace_dir, output, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mgpc::cli
