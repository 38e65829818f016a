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

#ifndef BYORISC_ISS_H_
#define BYORISC_ISS_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "byorisc/config.h"
#include "byorisc/image.h"
#include "byorisc/isa.h"
#include "byorisc/iseq.h"
#include "byorisc/semantics.h"
#include "byorisc/zolc.h"

namespace byorisc {

struct MachineState {
  uint32_t pc = 0;
  std::vector<uint32_t> regs;
  DataMemory dmem;
  bool halted = false;

  bool operator==(const MachineState&) const = default;
};

enum class RunStatus { kHalted, kSyscall, kBreak, kTrap, kBudgetExhausted };
std::string_view status_name(RunStatus s);

// Zeroed registers, data memory loaded from the image, pc 0. Throws
// InputError if the image initializes bytes beyond dmem_size.
MachineState initial_state(const ProgramImage& image, const MachineConfig& cfg);

// Register operands of a fetched instruction. For CIs the SID entry supplies
// the registers and the behavior is looked up through the image's CI
// bindings; a missing piece is reported as a fault.
struct OperandInfo {
  std::vector<uint8_t> src;
  std::vector<uint8_t> dst;
  const CiBehavior* ci = nullptr;
  std::optional<Fault> fault;
};
OperandInfo operand_info(const Instruction& in, uint32_t pc, const ProgramImage& image,
                         const MachineConfig& cfg, const CiLibrary& cilib);

struct StepResult {
  enum class Kind { kContinue, kHalt, kSyscall, kBreak, kTrap };
  Kind kind = Kind::kContinue;
  std::optional<Fault> fault;
};

// Executes the instruction at state.pc. ZOLC, when given, redirects the
// sequential successor of a task's last instruction.
StepResult step_iss(MachineState& state, const ProgramImage& image, const MachineConfig& cfg,
                    const CiLibrary& cilib, const ZolcTable* zolc = nullptr,
                    ZolcState* zolc_state = nullptr);

struct IssResult {
  MachineState state;
  uint64_t retired = 0;
  RunStatus status = RunStatus::kHalted;
  std::optional<Fault> fault;
};

IssResult run_iss(const ProgramImage& image, const MachineConfig& cfg, const CiLibrary& cilib,
                  uint64_t max_steps, const ZolcTable* zolc = nullptr);

}  // namespace byorisc

#endif  // BYORISC_ISS_H_
