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

#include "byorisc/isa.h"

#include <array>
#include <sstream>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {
namespace {

using M = Mnemonic;
using F = Format;
using G = Group;
using S = Shape;
using X = Feature;

constexpr OpcodeInfo kTable[] = {
    {M::kHalt, "halt", 0x00, F::kJ, G::kSYS, S::kNone, X::kBase, true},
    {M::kSyscal, "syscal", 0x01, F::kJ, G::kSYS, S::kNone, X::kBase, false},
    {M::kBreak, "break", 0x02, F::kJ, G::kSYS, S::kNone, X::kBase, false},
    {M::kAdd, "add", 0x04, F::kR, G::kA, S::kRRR, X::kBase, true},
    {M::kAddu, "addu", 0x05, F::kR, G::kA, S::kRRR, X::kBase, true},
    {M::kSub, "sub", 0x06, F::kR, G::kA, S::kRRR, X::kBase, true},
    {M::kSubu, "subu", 0x07, F::kR, G::kA, S::kRRR, X::kBase, true},
    {M::kAnd, "and", 0x08, F::kR, G::kL, S::kRRR, X::kBase, true},
    {M::kOr, "or", 0x09, F::kR, G::kL, S::kRRR, X::kBase, true},
    {M::kXor, "xor", 0x0A, F::kR, G::kL, S::kRRR, X::kBase, true},
    {M::kNor, "nor", 0x0B, F::kR, G::kL, S::kRRR, X::kLogic, false},
    {M::kSrav, "srav", 0x0C, F::kR, G::kS, S::kRRR, X::kBase, true},
    {M::kSrlv, "srlv", 0x0D, F::kR, G::kS, S::kRRR, X::kBase, true},
    {M::kSllv, "sllv", 0x0E, F::kR, G::kS, S::kRRR, X::kBase, true},
    {M::kCvt, "cvt", 0x0F, F::kT, G::kT, S::kCvt, X::kCvt, false},
    {M::kLli, "lli", 0x10, F::kI, G::kI, S::kRImm16, X::kBase, true},
    {M::kLhi, "lhi", 0x11, F::kI, G::kI, S::kRImm16, X::kBase, true},
    {M::kLoli, "loli", 0x12, F::kI, G::kI, S::kRImm16, X::kBase, true},
    {M::kSra, "sra", 0x13, F::kS, G::kS, S::kRRShamt, X::kShift, false},
    {M::kSrl, "srl", 0x14, F::kS, G::kS, S::kRRShamt, X::kShift, false},
    {M::kSll, "sll", 0x15, F::kS, G::kS, S::kRRShamt, X::kShift, false},
    {M::kSlt, "slt", 0x16, F::kR, G::kC, S::kRRR, X::kBase, true},
    {M::kSltu, "sltu", 0x17, F::kR, G::kC, S::kRRR, X::kBase, true},
    {M::kSeq, "seq", 0x18, F::kR, G::kC, S::kRRR, X::kSet, false},
    {M::kSne, "sne", 0x19, F::kR, G::kC, S::kRRR, X::kSet, false},
    {M::kSle, "sle", 0x1A, F::kR, G::kC, S::kRRR, X::kSet, false},
    {M::kSleu, "sleu", 0x1B, F::kR, G::kC, S::kRRR, X::kSet, false},
    {M::kMul, "mul", 0x1C, F::kR, G::kM, S::kRRR, X::kMul, false},
    {M::kMulu, "mulu", 0x1D, F::kR, G::kM, S::kRRR, X::kMul, false},
    {M::kDiv, "div", 0x1E, F::kR, G::kD, S::kRRR, X::kDiv, false},
    {M::kDivu, "divu", 0x1F, F::kR, G::kD, S::kRRR, X::kDiv, false},
    {M::kLw, "lw", 0x20, F::kR, G::kLS, S::kLoad, X::kBase, true},
    {M::kSw, "sw", 0x21, F::kR, G::kLS, S::kStore, X::kBase, true},
    {M::kLb, "lb", 0x22, F::kR, G::kLS, S::kLoad, X::kLs, false},
    {M::kLbu, "lbu", 0x23, F::kR, G::kLS, S::kLoad, X::kLs, false},
    {M::kLh, "lh", 0x24, F::kR, G::kLS, S::kLoad, X::kLs, false},
    {M::kLhu, "lhu", 0x25, F::kR, G::kLS, S::kLoad, X::kLs, false},
    {M::kSb, "sb", 0x26, F::kR, G::kLS, S::kStore, X::kLs, false},
    {M::kSh, "sh", 0x27, F::kR, G::kLS, S::kStore, X::kLs, false},
    {M::kJ, "j", 0x28, F::kJ, G::kF, S::kJump, X::kBase, true},
    {M::kJr, "jr", 0x29, F::kR, G::kF, S::kJumpReg, X::kBase, true},
    {M::kBnez, "bnez", 0x2A, F::kI, G::kF, S::kBranch, X::kBase, true},
    {M::kBeqz, "beqz", 0x2B, F::kI, G::kF, S::kBranch, X::kBase, true},
    {M::kJal, "jal", 0x2C, F::kJ, G::kP, S::kJump, X::kCti, false},
    {M::kAddi, "addi", 0x30, F::kR, G::kA, S::kRRImm8, X::kSmallImm, false},
    {M::kAndi, "andi", 0x31, F::kR, G::kL, S::kRRImm8, X::kSmallImm, false},
    {M::kOri, "ori", 0x32, F::kR, G::kL, S::kRRImm8, X::kSmallImm, false},
    {M::kXori, "xori", 0x33, F::kR, G::kL, S::kRRImm8, X::kSmallImm, false},
    {M::kMfcx, "mfcx", 0x38, F::kS, G::kCP, S::kCop, X::kCop, false},
    {M::kMtcx, "mtcx", 0x39, F::kS, G::kCP, S::kCop, X::kCop, false},
    {M::kCfcx, "cfcx", 0x3A, F::kS, G::kCP, S::kCop, X::kCop, false},
    {M::kCtcx, "ctcx", 0x3B, F::kS, G::kCP, S::kCop, X::kCop, false},
    {M::kLwcx, "lwcx", 0x3C, F::kS, G::kCP, S::kCop, X::kCop, false},
    {M::kSwcx, "swcx", 0x3D, F::kS, G::kCP, S::kCop, X::kCop, false},
    {M::kCi, "ci", kCiOpcodeBase, F::kB, G::kCI, S::kCi, X::kCi, false},
};

const std::array<const OpcodeInfo*, 256> kByOpcode = [] {
  std::array<const OpcodeInfo*, 256> a{};
  for (const auto& e : kTable) {
    if (e.mnemonic != M::kCi) a[e.opcode] = &e;
  }
  return a;
}();

bool feature_enabled(Feature f, const MachineConfig& c) {
  switch (f) {
    case X::kBase: return true;
    case X::kLs: return c.opt_ls;
    case X::kShift: return c.opt_shift;
    case X::kCti: return c.opt_cti;
    case X::kCvt: return c.opt_cvt;
    case X::kMul: return c.opt_mul;
    case X::kDiv: return c.opt_div;
    case X::kSet: return c.opt_set;
    case X::kLogic: return c.opt_logic;
    case X::kSmallImm: return c.have_small_imm;
    case X::kCop: return c.have_cop;
    case X::kCi: return c.have_ci;
  }
  return false;
}

void check_reg(int r, const MachineConfig& cfg, const char* what) {
  if (r < 0 || static_cast<uint32_t>(r) >= cfg.num_registers()) {
    throw InputError(std::string("register operand ") + what + " = r" +
                     std::to_string(r) + " exceeds " +
                     std::to_string(cfg.num_registers()) + " registers");
  }
}

void check_field(uint32_t v, uint32_t limit, const char* what) {
  if (v >= limit) {
    throw InputError(std::string(what) + " value " + std::to_string(v) +
                     " does not fit its field");
  }
}

}  // namespace

std::span<const OpcodeInfo> opcode_table() { return kTable; }

const OpcodeInfo& info(Mnemonic m) {
  for (const auto& e : kTable) {
    if (e.mnemonic == m) return e;
  }
  throw std::logic_error("mnemonic missing from opcode table");
}

const OpcodeInfo* find_mnemonic(std::string_view name) {
  std::string n = to_lower(name);
  for (const auto& e : kTable) {
    if (e.name == n) return &e;
  }
  return nullptr;
}

const OpcodeInfo* find_opcode(uint8_t opcode) { return kByOpcode[opcode]; }

bool is_supported(Mnemonic m, const MachineConfig& cfg) {
  const OpcodeInfo& e = info(m);
  if (e.opcode >= (1u << cfg.ow) && m != M::kCi) return false;
  return feature_enabled(e.feature, cfg);
}

bool is_encodable(Mnemonic m, const MachineConfig& cfg) {
  return is_supported(m, cfg) || info(m).group == G::kCP;
}

uint32_t encode(const Instruction& in, const MachineConfig& cfg) {
  const OpcodeInfo& e = info(in.mnemonic);
  if (!is_encodable(in.mnemonic, cfg)) {
    throw InputError("instruction '" + std::string(e.name) +
                     "' is not supported by this configuration");
  }
  uint32_t op = e.opcode;
  if (in.mnemonic == M::kCi) {
    op = in.opcode;
    if (!is_ci_opcode(in.opcode) || in.opcode >= (1u << cfg.ow)) {
      throw InputError("CI opcode 0x" + hex(in.opcode, 2) +
                       " outside the CI opcode region");
    }
  }
  const uint32_t top = op << 24;
  switch (e.shape) {
    case S::kNone:
      return top;
    case S::kRRR:
      check_reg(in.rd, cfg, "rd");
      check_reg(in.rs, cfg, "rs");
      check_reg(in.rt, cfg, "rt");
      return top | in.rs << 16 | in.rt << 8 | in.rd;
    case S::kRRImm8:
      check_reg(in.rd, cfg, "rd");
      check_reg(in.rs, cfg, "rs");
      check_field(in.imm, 256, "imm8");
      return top | in.rs << 16 | in.imm << 8 | in.rd;
    case S::kRRShamt:
    case S::kCop:
      check_reg(in.rd, cfg, "rd");
      check_reg(in.rs, cfg, "rs");
      check_field(in.imm, 32, "shamt");
      return top | in.rs << 16 | in.imm << 8 | in.rd;
    case S::kRImm16:
      check_reg(in.rd, cfg, "rd");
      check_field(in.imm, 65536, "imm16");
      return top | in.rd << 16 | in.imm;
    case S::kLoad:
      check_reg(in.rd, cfg, "rd");
      check_reg(in.rs, cfg, "rs");
      return top | in.rs << 16 | in.rd;
    case S::kStore:
      check_reg(in.rt, cfg, "rt");
      check_reg(in.rs, cfg, "rs");
      return top | in.rs << 16 | in.rt << 8;
    case S::kBranch:
      check_reg(in.rs, cfg, "rs");
      check_field(in.imm, 65536, "branch offset");
      return top | in.rs << 16 | in.imm;
    case S::kJump:
      check_field(in.imm, 1u << 24, "jump target");
      return top | in.imm;
    case S::kJumpReg:
      check_reg(in.rs, cfg, "rs");
      return top | in.rs << 16;
    case S::kCvt:
      check_reg(in.rd, cfg, "rd");
      check_reg(in.rs, cfg, "rs");
      if (!in.cvt.valid()) throw InputError("cvt width code out of range");
      return top | in.rs << 16 | in.cvt.pack() << 8 | in.rd;
    case S::kCi:
      return top | in.ciocc << 16;
  }
  return top;
}

std::optional<Instruction> decode(uint32_t word, const MachineConfig& cfg) {
  const uint8_t op = static_cast<uint8_t>(word >> 24);
  const uint8_t b2 = static_cast<uint8_t>(word >> 16);
  const uint8_t b1 = static_cast<uint8_t>(word >> 8);
  const uint8_t b0 = static_cast<uint8_t>(word);
  Instruction in;
  if (is_ci_opcode(op)) {
    if (!cfg.have_ci || op >= (1u << cfg.ow)) return std::nullopt;
    if ((word & 0xFFFF) != 0) return std::nullopt;
    in.mnemonic = M::kCi;
    in.opcode = op;
    in.ciocc = b2;
    return in;
  }
  const OpcodeInfo* e = find_opcode(op);
  if (e == nullptr || !is_encodable(e->mnemonic, cfg)) return std::nullopt;
  in.mnemonic = e->mnemonic;
  in.opcode = op;
  switch (e->shape) {
    case S::kNone:
      break;
    case S::kRRR:
      in.rs = b2, in.rt = b1, in.rd = b0;
      break;
    case S::kRRImm8:
      in.rs = b2, in.imm = b1, in.rd = b0;
      break;
    case S::kRRShamt:
    case S::kCop:
      in.rs = b2, in.imm = b1, in.rd = b0;
      break;
    case S::kRImm16:
      in.rd = b2, in.imm = word & 0xFFFF;
      break;
    case S::kLoad:
      in.rs = b2, in.rd = b0;
      break;
    case S::kStore:
      in.rs = b2, in.rt = b1;
      break;
    case S::kBranch:
      in.rs = b2, in.imm = word & 0xFFFF;
      break;
    case S::kJump:
      in.imm = word & 0xFFFFFF;
      break;
    case S::kJumpReg:
      in.rs = b2;
      break;
    case S::kCvt:
      in.rs = b2, in.cvt = CvtSpec::unpack(b1), in.rd = b0;
      break;
    case S::kCi:
      break;
  }
  // Unused bits, out-of-range registers and bad cvt codes all show up as a
  // re-encoding mismatch.
  try {
    if (encode(in, cfg) != word) return std::nullopt;
  } catch (const InputError&) {
    return std::nullopt;
  }
  return in;
}

Instruction make_rrr(Mnemonic m, int rd, int rs, int rt) {
  Instruction i;
  i.mnemonic = m;
  i.opcode = info(m).opcode;
  i.rd = static_cast<uint8_t>(rd);
  i.rs = static_cast<uint8_t>(rs);
  i.rt = static_cast<uint8_t>(rt);
  return i;
}

Instruction make_rr_imm(Mnemonic m, int rd, int rs, uint32_t imm) {
  Instruction i;
  i.mnemonic = m;
  i.opcode = info(m).opcode;
  i.rd = static_cast<uint8_t>(rd);
  i.rs = static_cast<uint8_t>(rs);
  i.imm = imm;
  return i;
}

Instruction make_imm16(Mnemonic m, int rd, uint32_t imm16) {
  Instruction i;
  i.mnemonic = m;
  i.opcode = info(m).opcode;
  i.rd = static_cast<uint8_t>(rd);
  i.imm = imm16;
  return i;
}

Instruction make_load(Mnemonic m, int rd, int rs) {
  Instruction i;
  i.mnemonic = m;
  i.opcode = info(m).opcode;
  i.rd = static_cast<uint8_t>(rd);
  i.rs = static_cast<uint8_t>(rs);
  return i;
}

Instruction make_store(Mnemonic m, int rt, int rs) {
  Instruction i;
  i.mnemonic = m;
  i.opcode = info(m).opcode;
  i.rt = static_cast<uint8_t>(rt);
  i.rs = static_cast<uint8_t>(rs);
  return i;
}

Instruction make_branch(Mnemonic m, int rs, int32_t offset) {
  Instruction i;
  i.mnemonic = m;
  i.opcode = info(m).opcode;
  i.rs = static_cast<uint8_t>(rs);
  i.imm = static_cast<uint16_t>(offset);
  return i;
}

Instruction make_jump(Mnemonic m, uint32_t target) {
  Instruction i;
  i.mnemonic = m;
  i.opcode = info(m).opcode;
  i.imm = target;
  return i;
}

Instruction make_jr(int rs) {
  Instruction i;
  i.mnemonic = M::kJr;
  i.opcode = info(M::kJr).opcode;
  i.rs = static_cast<uint8_t>(rs);
  return i;
}

Instruction make_cvt(int rd, int rs, CvtSpec spec) {
  Instruction i;
  i.mnemonic = M::kCvt;
  i.opcode = info(M::kCvt).opcode;
  i.rd = static_cast<uint8_t>(rd);
  i.rs = static_cast<uint8_t>(rs);
  i.cvt = spec;
  return i;
}

Instruction make_ci(uint8_t opcode, uint8_t ciocc) {
  Instruction i;
  i.mnemonic = M::kCi;
  i.opcode = opcode;
  i.ciocc = ciocc;
  return i;
}

Instruction make_halt() { return Instruction{}; }

std::string_view format_name(Format f) {
  switch (f) {
    case F::kR: return "R";
    case F::kS: return "S";
    case F::kI: return "I";
    case F::kJ: return "J";
    case F::kT: return "T";
    case F::kB: return "B";
  }
  return "?";
}

std::string_view group_name(Group g) {
  switch (g) {
    case G::kA: return "A";
    case G::kLS: return "LS";
    case G::kM: return "M";
    case G::kD: return "D";
    case G::kL: return "L";
    case G::kS: return "S";
    case G::kC: return "C";
    case G::kI: return "I";
    case G::kT: return "T";
    case G::kF: return "F";
    case G::kP: return "P";
    case G::kCP: return "CP";
    case G::kCI: return "CI";
    case G::kSYS: return "SYS";
  }
  return "?";
}

std::string dump_opcode_table(const MachineConfig& cfg) {
  static constexpr const char* kGate[] = {
      "base", "OPT_LS", "OPT_SHIFT", "OPT_CTI", "OPT_CVT", "OPT_MUL",
      "OPT_DIV", "OPT_SET", "OPT_LOGIC", "HAVE_SMALL_IMM", "HAVE_COP", "HAVE_CI"};
  std::ostringstream os;
  os << "opcode  mnemonic  fmt  group  gate            minimal  enabled\n";
  for (const auto& e : kTable) {
    std::string opc = e.mnemonic == M::kCi ? "40-FF" : "   " + hex(e.opcode, 2);
    char line[128];
    std::snprintf(line, sizeof(line), "%-7s %-9s %-4s %-6s %-15s %-8s %s\n",
                  opc.c_str(), std::string(e.name).c_str(),
                  std::string(format_name(e.format)).c_str(),
                  std::string(group_name(e.group)).c_str(),
                  kGate[static_cast<int>(e.feature)], e.minimal ? "yes" : "no",
                  is_supported(e.mnemonic, cfg) ? "yes" : "no");
    os << line;
  }
  int ci_count = cfg.have_ci ? static_cast<int>((1u << cfg.ow) - kCiOpcodeBase) : 0;
  os << "base opcodes: 0x00-0x3F, CI opcodes available: " << ci_count << "\n";
  return os.str();
}

}  // namespace byorisc
