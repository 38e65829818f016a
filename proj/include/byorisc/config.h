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

#ifndef BYORISC_CONFIG_H_
#define BYORISC_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>

namespace byorisc {

enum class MultTopology { kSingleCycle, kPipelined4 };
enum class ShifterTopology { kFunnel, kBarrel, kDedicated };

// The configuration vector of one ByoRISC instance.
struct MachineConfig {
  bool have_ci = false;
  bool have_zolc = false;
  bool have_small_imm = false;
  bool have_cop = false;  // accepted for completeness, must stay false
  bool forwarding = true;
  bool br_early = true;
  uint32_t imem_size = 8192;  // bytes
  uint32_t dmem_size = 8192;  // bytes
  int ow = 8;                 // opcode width
  int raw = 8;                // register address width
  int nwp = 1;
  int nrp = 2;
  bool opt_ls = false;
  bool opt_shift = false;
  bool opt_cti = false;
  bool opt_cvt = false;
  bool opt_mul = false;
  bool opt_div = false;
  bool opt_set = false;
  bool opt_logic = false;
  MultTopology mult_tpl = MultTopology::kSingleCycle;
  ShifterTopology shifter_tpl = ShifterTopology::kFunnel;
  int n_pipe = 2;  // execution stages, the last one accesses data memory
  int n_ci_inputs = 0;
  int n_ci_outputs = 0;

  uint32_t num_registers() const { return 1u << raw; }
  uint32_t imem_words() const { return imem_size / 4; }
  // IF [SID] ID EX1..EXn WB
  int pipeline_stages() const { return 3 + (have_ci ? 1 : 0) + n_pipe; }
  uint32_t link_register() const { return num_registers() - 1; }

  bool operator==(const MachineConfig&) const = default;
};

using RawConfig = std::map<std::string, std::string>;

// Applies defaults to a key/value map and checks every range. Keys are
// case-insensitive and may use either the upper-case parameter names
// (NRP, HAVE_CI, ...) or their lower-case spellings (nrp, have_ci, ...).
// Throws InputError on unknown keys or illegal values.
MachineConfig validate_config(const RawConfig& raw_config);

// Parses a flat "KEY=value" file ('#' comments) into a RawConfig.
RawConfig parse_config_text(const std::string& text,
                            const std::string& source = "<config>");
MachineConfig load_config_file(const std::string& path);

// Canonical KEY=value rendering; validate_config(parse(to_text(c))) == c.
std::string config_to_text(const MachineConfig& cfg);

// The testbed instance: 256 registers, 8 read / 8 write ports, (8,8) CIs and
// every optional instruction group enabled.
MachineConfig testbed_config();

}  // namespace byorisc

#endif  // BYORISC_CONFIG_H_
