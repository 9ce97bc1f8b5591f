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

#include "mgpc/multigen/trace_csv.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "mgpc/common/error.h"

namespace mgpc {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void CheckLabel(const std::string& label) {
  if (label.find_first_of(",\n\r") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "label '" + label + "' contains a separator");
  }
}

double ParseField(std::string_view field, size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kCorruptStream,
                "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

std::string Fixed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string SafeFileStem(const std::string& name) {
  std::string out;
  for (char c : name) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  }
  return out.empty() ? "unnamed" : out;
}

}  // namespace

std::string FormatReal(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string FormatTraceCsv(std::span<const GenerationTrace> traces, double max_drop) {
  std::string out(kTraceCsvHeader);
  out += "\n";
  for (const GenerationTrace& raw : traces) {
    CheckLabel(raw.sequence);
    CheckLabel(raw.method);
    CheckLabel(raw.rate_point);
    const GenerationTrace t = CappedTrace(raw);
    for (const GenerationRecord& r : t.records) {
      std::string delta, dcr;
      if (r.k >= 2) {
        const double d = DeltaPsnrY(t, r.k);
        delta = FormatReal(d);
        dcr = DropConvergenceText(DropConvergenceRate(d, max_drop));
      }
      const bool lossless = raw.records[r.k - 1].psnr_y >= kPsnrCap;
      out += t.sequence + "," + t.method + "," + t.rate_point + "," + std::to_string(r.k) + "," +
             FormatReal(r.bpp) + "," + FormatReal(r.psnr_y) + "," + delta + "," +
             FormatReal(PsnrYDrop(t, r.k)) + "," + dcr + "," + (lossless ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::vector<GenerationTrace> ParseTraceCsv(std::string_view text) {
  std::vector<GenerationTrace> out;
  size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kTraceCsvHeader) {
        throw Error(ErrorCode::kMalformedHeader, "not a trace CSV (unexpected header)");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> f = SplitFields(line);
    if (f.size() != 10) {
      throw Error(ErrorCode::kCorruptStream,
                  "line " + std::to_string(line_no) + ": expected 10 fields");
    }
    GenerationRecord r;
    r.k = static_cast<int>(ParseField(f[3], line_no));
    r.bpp = ParseField(f[4], line_no);
    r.psnr_y = f[9] == "1" ? HUGE_VAL : ParseField(f[5], line_no);
    if (out.empty() || out.back().sequence != f[0] || out.back().method != f[1] ||
        out.back().rate_point != f[2] || r.k == 1) {
      out.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), {}});
    }
    if (r.k != static_cast<int>(out.back().records.size()) + 1) {
      throw Error(ErrorCode::kCorruptStream,
                  "line " + std::to_string(line_no) + ": generations out of sequence");
    }
    out.back().records.push_back(r);
  }
  if (!header_seen) throw Error(ErrorCode::kMalformedHeader, "empty trace CSV");
  return out;
}

std::string FormatFirstVsLastTable(std::span<const GenerationTrace> traces) {
  std::string out =
      "sequence,method,rate_point,generations,bpp_1,psnr_y_1,bpp_K,psnr_y_K,psnr_y_drop_K\n";
  for (const GenerationTrace& raw : traces) {
    if (raw.records.empty()) continue;
    const GenerationTrace t = CappedTrace(raw);
    const GenerationRecord& first = t.records.front();
    const GenerationRecord& last = t.records.back();
    out += t.sequence + "," + t.method + "," + t.rate_point + "," + std::to_string(last.k) + "," +
           Fixed(first.bpp) + "," + Fixed(first.psnr_y) + "," + Fixed(last.bpp) + "," +
           Fixed(last.psnr_y) + "," + Fixed(PsnrYDrop(t, last.k)) + "\n";
  }
  return out;
}

std::string FormatDeltaTable(std::span<const GenerationTrace> traces, std::span<const int> ks) {
  std::string out = "method,traces";
  for (int k : ks) out += ",delta_psnr_y_k" + std::to_string(k);
  out += "\n";
  std::vector<std::string> methods;
  for (const GenerationTrace& t : traces) {
    if (std::find(methods.begin(), methods.end(), t.method) == methods.end()) {
      methods.push_back(t.method);
    }
  }
  for (const std::string& m : methods) {
    size_t count = 0;
    for (const GenerationTrace& t : traces) count += t.method == m;
    out += m + "," + std::to_string(count);
    for (int k : ks) {
      double sum = 0.0;
      size_t n = 0;
      for (const GenerationTrace& raw : traces) {
        if (raw.method != m || k < 2 || static_cast<size_t>(k) > raw.records.size()) continue;
        sum += DeltaPsnrY(CappedTrace(raw), k);
        ++n;
      }
      out += ",";
      if (n > 0) out += Fixed(sum / static_cast<double>(n));
    }
    out += "\n";
  }
  return out;
}

ReportFiles BuildReport(std::span<const GenerationTrace> traces) {
  if (traces.empty()) throw Error(ErrorCode::kInvalidArgument, "report needs at least one trace");
  std::vector<GenerationTrace> capped;
  for (const GenerationTrace& t : traces) capped.push_back(CappedTrace(t));
  const double max_drop = MaxDrop(capped);

  ReportFiles files;
  files.aggregate_csv = FormatTraceCsv(traces, max_drop);

  std::vector<std::string> methods;
  for (const GenerationTrace& t : capped) {
    if (std::find(methods.begin(), methods.end(), t.method) == methods.end()) {
      methods.push_back(t.method);
    }
  }
  std::string dcr_file = "# method mean_drop_convergence_rate values\n";
  for (const std::string& m : methods) {
    size_t longest = 0;
    for (const GenerationTrace& t : capped) {
      if (t.method == m) longest = std::max(longest, t.records.size());
    }
    std::string dat =
        "# k mean_bpp mean_psnr_y mean_psnr_y_drop mean_delta_psnr_y "
        "mean_drop_convergence_rate\n";
    double dcr_sum = 0.0;
    size_t dcr_count = 0;
    for (int k = 1; k <= static_cast<int>(longest); ++k) {
      double bpp = 0, psnr = 0, drop = 0, delta = 0, dcr = 0;
      size_t n = 0, n_dcr = 0;
      for (const GenerationTrace& t : capped) {
        if (t.method != m || static_cast<size_t>(k) > t.records.size()) continue;
        ++n;
        bpp += t.records[k - 1].bpp;
        psnr += t.records[k - 1].psnr_y;
        drop += PsnrYDrop(t, k);
        if (k >= 2) {
          const double d = DeltaPsnrY(t, k);
          delta += d;
          DropConvergence c = DropConvergenceRate(d, max_drop);
          if (c.kind == DropConvergence::Kind::kValue) {
            dcr += c.value;
            ++n_dcr;
          }
        }
      }
      const double dn = static_cast<double>(n);
      dat += std::to_string(k) + " " + FormatReal(bpp / dn) + " " + FormatReal(psnr / dn) + " " +
             FormatReal(drop / dn) + " " + (k >= 2 ? FormatReal(delta / dn) : "NaN") + " " +
             (n_dcr > 0 ? FormatReal(dcr / static_cast<double>(n_dcr)) : "NaN") + "\n";
      dcr_sum += dcr;
      dcr_count += n_dcr;
    }
    files.data_files.emplace_back(SafeFileStem(m) + ".dat", std::move(dat));
    dcr_file += m + " " +
                (dcr_count > 0 ? FormatReal(dcr_sum / static_cast<double>(dcr_count)) : "NaN") +
                " " + std::to_string(dcr_count) + "\n";
  }
  files.data_files.emplace_back("drop_convergence.dat", std::move(dcr_file));
  return files;
}

}  // namespace mgpc
