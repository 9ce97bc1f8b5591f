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

#include "mgpc/codec/range_coder.h"

#include <algorithm>
#include <string>

#include "mgpc/common/error.h"

namespace mgpc {
namespace {

constexpr uint32_t kTop = 1u << 24;
constexpr int kMaxGolombPrefix = 40;

uint64_t ZigZag(int32_t v) {
  return v >= 0 ? 2 * static_cast<uint64_t>(v) : 2 * static_cast<uint64_t>(-(int64_t)v) - 1;
}

int64_t UnZigZag(uint64_t u) {
  return (u & 1) ? -static_cast<int64_t>((u + 1) / 2) : static_cast<int64_t>(u / 2);
}

}  // namespace

void RangeEncoder::Encode(uint32_t start, uint32_t freq) {
  any_ = true;
  const uint32_t r = range_ >> kCdfPrecisionBits;
  low_ += static_cast<uint64_t>(r) * start;
  range_ = r * freq;
  while (range_ < kTop) {
    range_ <<= 8;
    ShiftLow();
  }
}

void RangeEncoder::ShiftLow() {
  if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const uint8_t carry = static_cast<uint8_t>(low_ >> 32);
    uint8_t pending = cache_;
    do {
      if (skip_first_) {
        skip_first_ = false;
      } else {
        out_.push_back(static_cast<uint8_t>(pending + carry));
      }
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<uint8_t> RangeEncoder::Finish() {
  if (!any_) return {};
  for (int i = 0; i < 5; ++i) ShiftLow();
  any_ = false;
  return std::move(out_);
}

uint8_t RangeDecoder::NextByte() {
  if (pos_ >= data_.size()) {
    throw Error(ErrorCode::kTruncatedStream, "range-coded payload ends early");
  }
  return data_[pos_++];
}

uint32_t RangeDecoder::Peek() {
  if (!started_) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | NextByte();
    started_ = true;
  }
  step_ = range_ >> kCdfPrecisionBits;
  return std::min<uint32_t>(code_ / step_, kCdfTotal - 1);
}

void RangeDecoder::Consume(uint32_t start, uint32_t freq) {
  code_ -= step_ * start;
  range_ = step_ * freq;
  while (range_ < kTop) {
    code_ = (code_ << 8) | NextByte();
    range_ <<= 8;
  }
}

size_t RangeDecoder::DecodeSymbol(const QuantizedCdf& table) {
  const uint32_t f = Peek();
  auto it = std::upper_bound(table.cdf.begin(), table.cdf.end(), f);
  size_t index = static_cast<size_t>(it - table.cdf.begin()) - 1;
  index = std::min(index, table.num_symbols() - 1);
  Consume(table.cdf[index], table.cdf[index + 1] - table.cdf[index]);
  return index;
}

bool RangeDecoder::DecodeBit() {
  const bool bit = Peek() >= kCdfTotal / 2;
  Consume(bit ? kCdfTotal / 2 : 0, kCdfTotal / 2);
  return bit;
}

void EncodeValue(RangeEncoder& enc, const QuantizedCdf& table, int32_t value) {
  if (value >= table.min_symbol && value <= table.max_value()) {
    enc.EncodeSymbol(table, static_cast<size_t>(value - table.min_symbol));
    return;
  }
  if (!table.has_escape) {
    throw Error(ErrorCode::kSymbolOutOfSupport,
                "value " + std::to_string(value) + " outside table support [" +
                    std::to_string(table.min_symbol) + ", " + std::to_string(table.max_value()) +
                    "]");
  }
  enc.EncodeSymbol(table, table.num_symbols() - 1);
  // Exp-Golomb (order 0) of the zigzagged value.
  const uint64_t n = ZigZag(value) + 1;
  int bits = 0;
  while ((n >> (bits + 1)) != 0) ++bits;
  for (int i = 0; i < bits; ++i) enc.EncodeBit(false);
  for (int i = bits; i >= 0; --i) enc.EncodeBit(((n >> i) & 1) != 0);
}

int32_t DecodeValue(RangeDecoder& dec, const QuantizedCdf& table) {
  const size_t index = dec.DecodeSymbol(table);
  if (!table.has_escape || index + 1 < table.num_symbols()) {
    return table.min_symbol + static_cast<int32_t>(index);
  }
  int bits = 0;
  while (!dec.DecodeBit()) {
    if (++bits > kMaxGolombPrefix) {
      throw Error(ErrorCode::kCorruptStream, "escape code prefix too long");
    }
  }
  uint64_t n = 1;
  for (int i = 0; i < bits; ++i) n = (n << 1) | (dec.DecodeBit() ? 1 : 0);
  const int64_t v = UnZigZag(n - 1);
  if (v < INT32_MIN || v > INT32_MAX) {
    throw Error(ErrorCode::kCorruptStream, "escaped value out of range");
  }
  return static_cast<int32_t>(v);
}

std::vector<uint8_t> RangeEncode(std::span<const int32_t> symbols,
                                 std::span<const QuantizedCdf* const> tables) {
  if (symbols.size() != tables.size()) {
    throw Error(ErrorCode::kShapeMismatch, "one table per symbol required");
  }
  RangeEncoder enc;
  for (size_t i = 0; i < symbols.size(); ++i) {
    const QuantizedCdf& t = *tables[i];
    const int64_t index = static_cast<int64_t>(symbols[i]) - t.min_symbol;
    if (index < 0 || index >= static_cast<int64_t>(t.num_symbols())) {
      throw Error(ErrorCode::kSymbolOutOfSupport,
                  "symbol " + std::to_string(symbols[i]) + " at position " + std::to_string(i) +
                      " outside table support");
    }
    enc.EncodeSymbol(t, static_cast<size_t>(index));
  }
  return enc.Finish();
}

std::vector<int32_t> RangeDecode(std::span<const uint8_t> bytes,
                                 std::span<const QuantizedCdf* const> tables) {
  RangeDecoder dec(bytes);
  std::vector<int32_t> out;
  out.reserve(tables.size());
  for (const QuantizedCdf* t : tables) {
    out.push_back(t->min_symbol + static_cast<int32_t>(dec.DecodeSymbol(*t)));
  }
  return out;
}

}  // namespace mgpc
