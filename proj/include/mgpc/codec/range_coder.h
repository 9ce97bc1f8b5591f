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

#ifndef MGPC_CODEC_RANGE_CODER_H_
#define MGPC_CODEC_RANGE_CODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mgpc/codec/entropy.h"

namespace mgpc {

// Byte-oriented range coder with a 64-bit low register and carry
// propagation through a cached byte. Frequencies have 16-bit precision.
class RangeEncoder {
 public:
  void Encode(uint32_t start, uint32_t freq);
  void EncodeSymbol(const QuantizedCdf& table, size_t index) {
    Encode(table.cdf[index], table.cdf[index + 1] - table.cdf[index]);
  }
  void EncodeBit(bool bit) { Encode(bit ? kCdfTotal / 2 : 0, kCdfTotal / 2); }
  // Flushes and returns the payload. Nothing encoded yields no bytes.
  std::vector<uint8_t> Finish();

 private:
  void ShiftLow();

  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
  bool skip_first_ = true;
  bool any_ = false;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> data) : data_(data) {}

  size_t DecodeSymbol(const QuantizedCdf& table);
  bool DecodeBit();
  size_t consumed() const { return pos_; }

 private:
  uint32_t Peek();  // call before Consume
  void Consume(uint32_t start, uint32_t freq);
  uint8_t NextByte();

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  bool started_ = false;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t step_ = 0;
};

// Integer values in a table's value range are coded directly; values outside
// it (tables with an escape only) as the escape symbol plus Exp-Golomb bits.
void EncodeValue(RangeEncoder& enc, const QuantizedCdf& table, int32_t value);
int32_t DecodeValue(RangeDecoder& dec, const QuantizedCdf& table);

// One table per symbol. Symbols must lie in their table's support (an escape
// entry counts as a plain symbol here).
std::vector<uint8_t> RangeEncode(std::span<const int32_t> symbols,
                                 std::span<const QuantizedCdf* const> tables);
std::vector<int32_t> RangeDecode(std::span<const uint8_t> bytes,
                                 std::span<const QuantizedCdf* const> tables);

}  // namespace mgpc

#endif  // MGPC_CODEC_RANGE_CODER_H_
