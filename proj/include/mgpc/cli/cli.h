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

#ifndef MGPC_CLI_CLI_H_
#define MGPC_CLI_CLI_H_

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgpc::cli {

// Bad flags, bad config or plan files, missing inputs. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// One multi-generation experiment: a cloud, a codec and a chain length.
struct PlanCell {
  std::string label;
  std::filesystem::path input;
  std::string codec;  // checkpoint path, or "control"
  std::string method;
  int lambda_id = 0;
  int generations = 0;
  std::string sequence;
  std::string rate_point;
};

struct ExperimentPlan {
  std::filesystem::path output_dir;
  int jobs = 1;
  std::vector<PlanCell> cells;  // sorted by label
};

// Plan text is flat key = value:
//   output_dir = results
//   jobs = 2
//   cell.<label>.input = toy.ply
//   cell.<label>.codec = lcc.ckpt        (or "control")
//   cell.<label>.method = LCC
//   cell.<label>.lambda_id = 1
//   cell.<label>.generations = 10
//   cell.<label>.sequence = toy           (optional, default: input stem)
//   cell.<label>.rate_point = r1          (optional, default: "r<lambda_id>")
// Relative paths are resolved against `base_dir`. Throws UsageError.
ExperimentPlan ParsePlan(std::string_view text, const std::filesystem::path& base_dir);

// Checks that every referenced file exists. Throws UsageError.
void ValidatePlan(const ExperimentPlan& plan);

// Runs the command line (args[0] is the program name) and returns the exit
// code. Normal output goes to `out`, diagnostics and warnings to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mgpc::cli

#endif  // MGPC_CLI_CLI_H_
