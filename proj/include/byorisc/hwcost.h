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

#ifndef BYORISC_HWCOST_H_
#define BYORISC_HWCOST_H_

#include <cstdint>
#include <string>

#include "byorisc/config.h"

namespace byorisc {

constexpr uint64_t kBlockRamBits = 18432;

int sid_entry_width(int n_i, int n_o, uint32_t nr_registers);

struct SidLutCost {
  uint64_t total_bits = 0;
  uint64_t block_rams = 0;
};
SidLutCost sid_lut_cost(uint64_t entries, int n_i, int n_o, uint32_t nr_registers,
                        uint64_t block_bits = kBlockRamBits);

struct SrbCost {
  int mux_count = 0;
  int mux_fanin = 0;
  int comparators = 0;
  int ctrl_bits = 0;
};
SrbCost srb_cost(int n_rp, int n_wp, int n_pipe);

struct MprfCost {
  int banks = 0;
  int regs_per_bank = 0;
  int clustered_banks = 0;  // single-copy alternative, informational
};
MprfCost mprf_cost(int n_rp, int n_wp, uint32_t nr_registers);

struct CostReport {
  int sid_entry_bits = 0;
  uint64_t sid_entries = 0;
  uint64_t sid_total_bits = 0;
  uint64_t sid_block_rams_18k = 0;
  int srb_mux_count = 0;
  int srb_mux_fanin = 0;
  int srb_comparators = 0;
  int srb_ctrl_bits = 0;
  int mprf_banks = 0;
  int mprf_regs_per_bank = 0;
  int mprf_clustered_banks = 0;
};

// SID figures are zero for machines without custom instructions.
CostReport cost_report(const MachineConfig& cfg, uint64_t block_bits = kBlockRamBits);
std::string format_cost_text(const CostReport& r);
std::string format_cost_csv(const CostReport& r);

int ceil_log2(uint64_t v);

}  // namespace byorisc

#endif  // BYORISC_HWCOST_H_
