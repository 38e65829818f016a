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

#ifndef BYORISC_PIPELINE_H_
#define BYORISC_PIPELINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "byorisc/config.h"
#include "byorisc/image.h"
#include "byorisc/iseq.h"
#include "byorisc/iss.h"
#include "byorisc/zolc.h"

namespace byorisc {

// Stall causes as reported in SimResult::stalls.
inline constexpr const char* kStallLoadUse = "load_use";
inline constexpr const char* kStallMulticycle = "multicycle";
inline constexpr const char* kStallCiBusy = "ci_busy";
inline constexpr const char* kStallNoForwarding = "no_forwarding";
inline constexpr const char* kStallBranchFlush = "branch_flush";

// Bypass candidates seen from EX1: stages[0] is EX2 (pipe_sel 1, youngest),
// the last entry is WB (pipe_sel n_pipe). Each stage has one entry per write
// port.
struct ForwardPort {
  bool valid = false;
  uint8_t addr = 0;
  bool complete = true;
};
struct ForwardSnapshot {
  std::vector<std::vector<ForwardPort>> stages;
};

// pipe_sel 0 selects the register file.
struct ForwardChoice {
  int pipe_sel = 0;
  int wp_sel = 0;
  bool complete = true;
  bool operator==(const ForwardChoice&) const = default;
};

ForwardChoice forward_select(uint8_t read_addr, const ForwardSnapshot& snap, const MachineConfig& cfg);

struct PipelineOptions {
  uint64_t max_cycles = 50'000'000;
  bool trace = false;
  const ZolcTable* zolc = nullptr;
};

struct SimResult {
  uint64_t cycles = 0;
  uint64_t retired = 0;
  std::map<std::string, uint64_t> stalls;
  MachineState final_state;
  RunStatus status = RunStatus::kHalted;
  std::optional<Fault> fault;
  // CSV: header then one row per cycle.
  std::vector<std::string> trace;
  int max_mem_transfers = 0;  // largest per-cycle count observed
  uint64_t ci_executed = 0;

  uint64_t total_stalls() const;
};

// Cycle-level model of IF [SID] ID EX1..EXn WB. Throws std::logic_error if
// an internal invariant breaks (more than one memory transfer in a cycle, or
// a CI that did not read exactly one SID entry).
SimResult run_pipeline(const ProgramImage& image, const MachineConfig& cfg, const CiLibrary& cilib,
                       const PipelineOptions& opts = {});

}  // namespace byorisc

#endif  // BYORISC_PIPELINE_H_
