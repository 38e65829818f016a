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

#ifndef BYORISC_ASSEMBLER_H_
#define BYORISC_ASSEMBLER_H_

#include <string>

#include "byorisc/config.h"
#include "byorisc/image.h"
#include "byorisc/isa.h"

namespace byorisc {

// Two-pass assembler. Grammar, one statement per line:
//   [label:]... [mnemonic operands | directive]   # comment
// Directives: .org <word addr>, .word <value>, .data <byte addr> <byte>...,
// .cidef <name> <opcode>, .ci <name>, occ=N, out=(...), in=(...).
// A CI instruction is "ci <name>, occ=N[, out=(...), in=(...)]"; the operand
// lists may be omitted when a .ci directive defines that occurrence.
// Throws ParseError.
ProgramImage assemble(const std::string& source, const MachineConfig& cfg,
                      const std::string& source_name = "<asm>");

// Canonical text that reassembles to the same code words and SID table.
std::string disassemble(const ProgramImage& image, const MachineConfig& cfg);

// One instruction in assembler syntax. Branch and jump targets are printed
// as absolute word addresses; CI names come from image when given.
std::string format_instruction(const Instruction& in, uint32_t pc,
                               const ProgramImage* image = nullptr);

}  // namespace byorisc

#endif  // BYORISC_ASSEMBLER_H_
