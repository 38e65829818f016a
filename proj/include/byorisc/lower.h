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

#ifndef BYORISC_LOWER_H_
#define BYORISC_LOWER_H_

#include <cstdint>
#include <map>
#include <string>

#include "byorisc/config.h"
#include "byorisc/iseq.h"

namespace byorisc {

// r0 holds zero and the top register is kept for the link address.
struct RegisterMap {
  std::map<std::string, uint8_t> names;
  std::map<uint32_t, uint8_t> constants;
  uint32_t next = 1;
};

// Assigns registers to names and nonzero constants in order of first
// appearance, extending base when given.
RegisterMap build_register_map(const CdfgProgram& p, const MachineConfig& cfg,
                               const RegisterMap* base = nullptr);

struct LoweredProgram {
  std::string assembly;
  RegisterMap regs;
  int prologue = 0;  // constant set-up instructions before the first block
};

// Every op becomes exactly one instruction; a halt ends the program.
LoweredProgram lower_iseq(const CdfgProgram& p, const MachineConfig& cfg,
                          const RegisterMap* base = nullptr);

std::string block_label(const std::string& label);

}  // namespace byorisc

#endif  // BYORISC_LOWER_H_
