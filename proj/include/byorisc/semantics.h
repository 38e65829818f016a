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

#ifndef BYORISC_SEMANTICS_H_
#define BYORISC_SEMANTICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "byorisc/config.h"
#include "byorisc/isa.h"

namespace byorisc {

enum class FaultKind {
  kIllegalInstruction,
  kFetchOutOfRange,
  kMisaligned,
  kAddressRange,
  kMissingSid,
  kMissingCi,
  kUnimplemented,
  kCiArity,
};

struct Fault {
  FaultKind kind;
  uint32_t pc = 0;
  uint32_t addr = 0;
  std::string detail;

  std::string describe() const;
};

std::string_view fault_name(FaultKind k);

// Register operands read and written by a base (non-CI) instruction. Writes
// to r0 are reported; callers drop them at commit.
std::vector<uint8_t> source_registers(const Instruction& in);
std::optional<uint8_t> dest_register(const Instruction& in, const MachineConfig& cfg);

bool is_load(Mnemonic m);
bool is_store(Mnemonic m);
inline bool is_memory(Mnemonic m) { return is_load(m) || is_store(m); }
int access_size(Mnemonic m);
bool is_control_transfer(Mnemonic m);

// Two-operand integer semantics shared by the interpreter, the pipeline and
// the ISeq evaluator. For immediate forms `b` is the already extended
// immediate.
uint32_t alu(Mnemonic m, uint32_t a, uint32_t b);
uint32_t convert(CvtSpec spec, uint32_t value);

// Result of a register-writing, non-memory instruction given its source
// values in source_registers() order.
uint32_t compute_result(const Instruction& in, std::span<const uint32_t> src, uint32_t pc);

struct BranchOutcome {
  bool taken = false;
  uint32_t target = 0;
};
BranchOutcome resolve_control(const Instruction& in, std::span<const uint32_t> src,
                              uint32_t pc);

// Byte-addressed little-endian data memory.
class DataMemory {
 public:
  explicit DataMemory(uint32_t size = 0) : bytes_(size, 0) {}

  uint32_t size() const { return static_cast<uint32_t>(bytes_.size()); }
  std::optional<Fault> check(Mnemonic m, uint32_t addr) const;
  // Callers check() first; these assume a legal access.
  uint32_t load(Mnemonic m, uint32_t addr) const;
  void store(Mnemonic m, uint32_t addr, uint32_t value);

  uint8_t byte(uint32_t addr) const { return bytes_.at(addr); }
  void set_byte(uint32_t addr, uint8_t v) { bytes_.at(addr) = v; }
  const std::vector<uint8_t>& bytes() const { return bytes_; }

  bool operator==(const DataMemory&) const = default;

 private:
  std::vector<uint8_t> bytes_;
};

}  // namespace byorisc

#endif  // BYORISC_SEMANTICS_H_
