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

#ifndef MGPC_MULTIGEN_TRACE_CSV_H_
#define MGPC_MULTIGEN_TRACE_CSV_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mgpc/multigen/metrics.h"

namespace mgpc {

inline constexpr std::string_view kTraceCsvHeader =
    "sequence,method,rate_point,k,bpp,psnr_y,delta_psnr_y,psnr_y_drop,drop_convergence_rate,"
    "lossless_flag";

// One row per generation. PSNR is capped at kPsnrCap and every derived column
// is computed from the capped values, so a file is consistent on its own.
// delta and drop convergence are empty at k = 1. `max_drop` normalizes the
// convergence rate (see MaxDrop).
std::string FormatTraceCsv(std::span<const GenerationTrace> traces, double max_drop);

// Groups consecutive rows with equal labels into traces; lossless rows get
// PSNR +inf. Throws kMalformedHeader / kCorruptStream on bad input.
std::vector<GenerationTrace> ParseTraceCsv(std::string_view text);

// Shortest text that parses back to the same double.
std::string FormatReal(double v);

// Table of single-pass versus final-generation quality per trace:
// sequence,method,rate_point,generations,bpp_1,psnr_y_1,bpp_K,psnr_y_K,psnr_y_drop_K
std::string FormatFirstVsLastTable(std::span<const GenerationTrace> traces);

// Mean delta PSNR-Y per method at the requested generations (blank where no
// trace is that long): method,traces,delta_psnr_y_k<k>...
std::string FormatDeltaTable(std::span<const GenerationTrace> traces, std::span<const int> ks);

struct ReportFiles {
  std::string aggregate_csv;
  // (file name, contents) of whitespace-separated plot data.
  std::vector<std::pair<std::string, std::string>> data_files;
};

// aggregate.csv holds every trace with the convergence rate normalized by the
// largest drop in the set; per-method <method>.dat files hold means over
// traces by generation, and drop_convergence.dat the average convergence
// rate per method.
ReportFiles BuildReport(std::span<const GenerationTrace> traces);

}  // namespace mgpc

#endif  // MGPC_MULTIGEN_TRACE_CSV_H_
