// Copyright 2026 The ByoRISC Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BYORISC_IMAGE_H_
#define BYORISC_IMAGE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace byorisc {

// Predecoded register operands of one CI occurrence. Enabled operands are
// stored in port order; the write/read enable vectors are implied by the
// vector lengths.
struct SidEntry {
  std::vector<uint8_t> dst;
  std::vector<uint8_t> src;

  bool operator==(const SidEntry&) const = default;
};

int sid_entry_bits(int n_i, int n_o, int raw);

// Bit layout, MSB first: we_v[n_o] dst0..dst{n_o-1}[raw] re_v[n_i]
// src0..src{n_i-1}[raw]. Bit k of an enable vector (counting from its MSB)
// enables operand k. Rendered as lower-case hex, zero padded on the left.
std::string pack_sid_entry(const SidEntry& e, int n_i, int n_o, int raw);
SidEntry unpack_sid_entry(const std::string& hex_bits, int n_i, int n_o, int raw);

struct ProgramImage {
  std::vector<uint32_t> code;
  std::map<uint32_t, uint8_t> data_init;
  std::map<uint8_t, SidEntry> sid_table;
  std::map<uint8_t, std::string> ci_bindings;  // CI opcode -> CI name
  std::map<std::string, uint32_t> labels;
  // SID geometry used for serialization.
  int sid_ni = 0;
  int sid_no = 0;
  int sid_raw = 8;

  bool operator==(const ProgramImage&) const = default;
};

// Text form:
//   BYORISC1
//   code <n>            then n lines of 8 hex digits
//   sid <n> ni <a> no <b> raw <r>   then n lines "<ciocc hex> <entry hex>"
//   ci <n>              then n lines "<opcode hex> <name>"
//   data <n>            then n lines "<byte addr hex> <hex bytes>"
//   label <n>           then n lines "<word addr hex> <name>"
std::string serialize_image(const ProgramImage& img);
ProgramImage parse_image(const std::string& text, const std::string& source = "<image>");

}  // namespace byorisc

#endif  // BYORISC_IMAGE_H_
