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

#include "byorisc/hwcost.h"

#include <sstream>
#include <utility>
#include <vector>

#include "byorisc/error.h"

namespace byorisc {

int ceil_log2(uint64_t v) {
  int bits = 0;
  while ((uint64_t{1} << bits) < v) ++bits;
  return bits;
}

namespace {

void require_power_of_two(uint32_t nr) {
  if (nr == 0 || (nr & (nr - 1)) != 0) {
    throw InputError("register count " + std::to_string(nr) + " is not a power of two");
  }
}

}  // namespace

int sid_entry_width(int n_i, int n_o, uint32_t nr_registers) {
  require_power_of_two(nr_registers);
  return (n_i + n_o) * (ceil_log2(nr_registers) + 1);
}

SidLutCost sid_lut_cost(uint64_t entries, int n_i, int n_o, uint32_t nr_registers, uint64_t block_bits) {
  if (entries == 0) throw InputError("SID table needs at least one entry");
  if (block_bits == 0) throw InputError("block RAM capacity must be positive");
  SidLutCost c;
  c.total_bits = entries * static_cast<uint64_t>(sid_entry_width(n_i, n_o, nr_registers));
  c.block_rams = (c.total_bits + block_bits - 1) / block_bits;
  return c;
}

SrbCost srb_cost(int n_rp, int n_wp, int n_pipe) {
  if (n_rp < 1 || n_wp < 1 || n_pipe < 1) throw InputError("bypass parameters must be at least 1");
  SrbCost c;
  c.mux_count = n_rp;
  c.mux_fanin = n_pipe * n_wp + 1;
  c.comparators = n_rp * n_pipe * n_wp;
  c.ctrl_bits = ceil_log2(static_cast<uint64_t>(n_wp)) + ceil_log2(static_cast<uint64_t>(n_pipe) + 1);
  return c;
}

MprfCost mprf_cost(int n_rp, int n_wp, uint32_t nr_registers) {
  if (n_rp < 1 || n_wp < 1) throw InputError("port counts must be at least 1");
  if (nr_registers % static_cast<uint32_t>(n_wp) != 0) {
    throw InputError("register count " + std::to_string(nr_registers) + " is not divisible by " +
                     std::to_string(n_wp) + " write ports");
  }
  return {n_rp * n_wp, static_cast<int>(nr_registers / static_cast<uint32_t>(n_wp)), n_rp};
}

CostReport cost_report(const MachineConfig& cfg, uint64_t block_bits) {
  CostReport r;
  if (cfg.have_ci) {
    r.sid_entries = 256;
    r.sid_entry_bits = sid_entry_width(cfg.n_ci_inputs, cfg.n_ci_outputs, cfg.num_registers());
    SidLutCost s = sid_lut_cost(r.sid_entries, cfg.n_ci_inputs, cfg.n_ci_outputs, cfg.num_registers(),
                                block_bits);
    r.sid_total_bits = s.total_bits;
    r.sid_block_rams_18k = s.block_rams;
  }
  SrbCost b = srb_cost(cfg.nrp, cfg.nwp, cfg.n_pipe);
  r.srb_mux_count = b.mux_count;
  r.srb_mux_fanin = b.mux_fanin;
  r.srb_comparators = b.comparators;
  r.srb_ctrl_bits = b.ctrl_bits;
  MprfCost m = mprf_cost(cfg.nrp, cfg.nwp, cfg.num_registers());
  r.mprf_banks = m.banks;
  r.mprf_regs_per_bank = m.regs_per_bank;
  r.mprf_clustered_banks = m.clustered_banks;
  return r;
}

namespace {

std::vector<std::pair<std::string, uint64_t>> fields(const CostReport& r) {
  return {{"sid_entry_bits", r.sid_entry_bits},
          {"sid_entries", r.sid_entries},
          {"sid_total_bits", r.sid_total_bits},
          {"sid_block_rams_18k", r.sid_block_rams_18k},
          {"srb_mux_count", r.srb_mux_count},
          {"srb_mux_fanin", r.srb_mux_fanin},
          {"srb_comparators", r.srb_comparators},
          {"srb_ctrl_bits", r.srb_ctrl_bits},
          {"mprf_banks", r.mprf_banks},
          {"mprf_regs_per_bank", r.mprf_regs_per_bank},
          {"mprf_clustered_banks", r.mprf_clustered_banks}};
}

}  // namespace

std::string format_cost_text(const CostReport& r) {
  std::ostringstream o;
  for (const auto& [k, v] : fields(r)) {
    o << k << std::string(22 - k.size(), ' ') << v << "\n";
  }
  return o.str();
}

std::string format_cost_csv(const CostReport& r) {
  std::ostringstream o;
  o << "metric,value\n";
  for (const auto& [k, v] : fields(r)) o << k << "," << v << "\n";
  return o.str();
}

}  // namespace byorisc
