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

#ifndef BYORISC_ISA_H_
#define BYORISC_ISA_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "byorisc/config.h"

namespace byorisc {

enum class Format : uint8_t { kR, kS, kI, kJ, kT, kB };

enum class Group : uint8_t { kA, kLS, kM, kD, kL, kS, kC, kI, kT, kF, kP, kCP, kCI, kSYS };

enum class Mnemonic : uint8_t {
  kHalt, kSyscal, kBreak,
  kAdd, kAddu, kSub, kSubu,
  kAnd, kOr, kXor, kNor,
  kSrav, kSrlv, kSllv, kCvt,
  kLli, kLhi, kLoli,
  kSra, kSrl, kSll,
  kSlt, kSltu, kSeq, kSne, kSle, kSleu,
  kMul, kMulu, kDiv, kDivu,
  kLw, kSw, kLb, kLbu, kLh, kLhu, kSb, kSh,
  kJ, kJr, kBnez, kBeqz, kJal,
  kAddi, kAndi, kOri, kXori,
  kMfcx, kMtcx, kCfcx, kCtcx, kLwcx, kSwcx,
  kCi,
};

// How the operand fields of an instruction are used.
enum class Shape : uint8_t {
  kNone,      // halt
  kRRR,       // rd, rs, rt
  kRRImm8,    // rd, rs, imm8 (rt byte)
  kRRShamt,   // rd, rs, shamt
  kRImm16,    // rd, imm16
  kLoad,      // rd, (rs)
  kStore,     // rt, (rs)
  kBranch,    // rs, imm16 pc-relative word offset
  kJump,      // target24
  kJumpReg,   // rs
  kCvt,       // rd, rs, cvtspec
  kCop,       // rd, rs, shamt (reserved coprocessor encodings)
  kCi,        // ciocc
};

// Optional feature that gates a mnemonic.
enum class Feature : uint8_t {
  kBase, kLs, kShift, kCti, kCvt, kMul, kDiv, kSet, kLogic, kSmallImm, kCop, kCi,
};

struct OpcodeInfo {
  Mnemonic mnemonic;
  std::string_view name;
  uint8_t opcode;
  Format format;
  Group group;
  Shape shape;
  Feature feature;
  bool minimal;  // member of the 22-instruction minimal set
};

// CVT secondary opcode: {sign:1, srcwidth:3, dstwidth:3, pad:1}. Width codes
// 0/1/2 select 8/16/32 bits.
struct CvtSpec {
  bool sign = false;
  uint8_t src_width = 0;
  uint8_t dst_width = 0;

  uint8_t pack() const {
    return static_cast<uint8_t>((sign ? 0x80 : 0) | ((src_width & 7) << 4) |
                                ((dst_width & 7) << 1));
  }
  static CvtSpec unpack(uint8_t b) {
    return {(b & 0x80) != 0, static_cast<uint8_t>((b >> 4) & 7),
            static_cast<uint8_t>((b >> 1) & 7)};
  }
  bool valid() const { return src_width <= 2 && dst_width <= 2; }
  static int bits(uint8_t code) { return 8 << code; }
  bool operator==(const CvtSpec&) const = default;
};

// A decoded instruction. Only the fields meaningful for its shape are set;
// the rest stay zero so that equality is structural.
struct Instruction {
  Mnemonic mnemonic = Mnemonic::kHalt;
  uint8_t opcode = 0;  // primary opcode byte; distinguishes CIs
  uint8_t rs = 0;
  uint8_t rt = 0;
  uint8_t rd = 0;
  uint32_t imm = 0;    // raw field: imm8, shamt, imm16 or target24
  uint8_t ciocc = 0;
  CvtSpec cvt;

  bool operator==(const Instruction&) const = default;
};

constexpr uint8_t kCiOpcodeBase = 0x40;

std::span<const OpcodeInfo> opcode_table();
const OpcodeInfo& info(Mnemonic m);
const OpcodeInfo* find_mnemonic(std::string_view name);
const OpcodeInfo* find_opcode(uint8_t opcode);

inline bool is_ci_opcode(uint8_t opcode) { return (opcode & 0xC0) != 0; }

bool is_supported(Mnemonic m, const MachineConfig& cfg);
// Supported or a reserved coprocessor encoding (decodes, traps when run).
bool is_encodable(Mnemonic m, const MachineConfig& cfg);

// Throws InputError when the instruction is not encodable under cfg or an
// operand does not fit its field.
uint32_t encode(const Instruction& instr, const MachineConfig& cfg);

// nullopt means an illegal instruction under cfg: undefined opcode, gated
// feature, or non-zero bits in unused fields.
std::optional<Instruction> decode(uint32_t word, const MachineConfig& cfg);

// Helpers for building instructions in code and tests.
Instruction make_rrr(Mnemonic m, int rd, int rs, int rt);
Instruction make_rr_imm(Mnemonic m, int rd, int rs, uint32_t imm);
Instruction make_imm16(Mnemonic m, int rd, uint32_t imm16);
Instruction make_load(Mnemonic m, int rd, int rs);
Instruction make_store(Mnemonic m, int rt, int rs);
Instruction make_branch(Mnemonic m, int rs, int32_t offset);
Instruction make_jump(Mnemonic m, uint32_t target);
Instruction make_jr(int rs);
Instruction make_cvt(int rd, int rs, CvtSpec spec);
Instruction make_ci(uint8_t opcode, uint8_t ciocc);
Instruction make_halt();

inline int32_t branch_offset(const Instruction& i) {
  return static_cast<int16_t>(static_cast<uint16_t>(i.imm));
}
inline int32_t imm8_signed(const Instruction& i) {
  return static_cast<int8_t>(static_cast<uint8_t>(i.imm));
}

// Text table of every opcode: value, mnemonic, format, group and gate.
std::string dump_opcode_table(const MachineConfig& cfg);

std::string_view format_name(Format f);
std::string_view group_name(Group g);

}  // namespace byorisc

#endif  // BYORISC_ISA_H_
