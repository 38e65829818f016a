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

#include "byorisc/semantics.h"

#include <limits>

#include "byorisc/text_util.h"

namespace byorisc {

using M = Mnemonic;

std::string_view fault_name(FaultKind k) {
  switch (k) {
    case FaultKind::kIllegalInstruction: return "illegal-instruction";
    case FaultKind::kFetchOutOfRange: return "fetch-out-of-range";
    case FaultKind::kMisaligned: return "misaligned-access";
    case FaultKind::kAddressRange: return "address-out-of-range";
    case FaultKind::kMissingSid: return "missing-sid-entry";
    case FaultKind::kMissingCi: return "missing-ci-behavior";
    case FaultKind::kUnimplemented: return "unimplemented";
    case FaultKind::kCiArity: return "ci-arity-mismatch";
  }
  return "?";
}

std::string Fault::describe() const {
  std::string s = std::string(fault_name(kind)) + " at pc " + std::to_string(pc);
  if (kind == FaultKind::kMisaligned || kind == FaultKind::kAddressRange) {
    s += " (address 0x" + hex(addr, 8) + ")";
  }
  if (!detail.empty()) s += ": " + detail;
  return s;
}

std::vector<uint8_t> source_registers(const Instruction& in) {
  switch (info(in.mnemonic).shape) {
    case Shape::kRRR: return {in.rs, in.rt};
    case Shape::kRRImm8:
    case Shape::kRRShamt:
    case Shape::kCvt:
    case Shape::kLoad:
    case Shape::kBranch:
    case Shape::kJumpReg:
      return {in.rs};
    case Shape::kStore: return {in.rs, in.rt};
    case Shape::kRImm16:
      if (in.mnemonic == M::kLli) return {};
      return {in.rd};
    case Shape::kNone:
    case Shape::kJump:
    case Shape::kCop:
    case Shape::kCi:
      return {};
  }
  return {};
}

std::optional<uint8_t> dest_register(const Instruction& in, const MachineConfig& cfg) {
  switch (info(in.mnemonic).shape) {
    case Shape::kRRR:
    case Shape::kRRImm8:
    case Shape::kRRShamt:
    case Shape::kCvt:
    case Shape::kLoad:
    case Shape::kRImm16:
      return in.rd;
    case Shape::kJump:
      if (in.mnemonic == M::kJal) return static_cast<uint8_t>(cfg.link_register());
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

bool is_load(Mnemonic m) {
  return m == M::kLw || m == M::kLb || m == M::kLbu || m == M::kLh || m == M::kLhu;
}

bool is_store(Mnemonic m) { return m == M::kSw || m == M::kSb || m == M::kSh; }

int access_size(Mnemonic m) {
  switch (m) {
    case M::kLw:
    case M::kSw:
      return 4;
    case M::kLh:
    case M::kLhu:
    case M::kSh:
      return 2;
    case M::kLb:
    case M::kLbu:
    case M::kSb:
      return 1;
    default:
      return 0;
  }
}

bool is_control_transfer(Mnemonic m) {
  return m == M::kJ || m == M::kJr || m == M::kJal || m == M::kBnez || m == M::kBeqz;
}

uint32_t alu(Mnemonic m, uint32_t a, uint32_t b) {
  const int32_t sa = static_cast<int32_t>(a);
  const int32_t sb = static_cast<int32_t>(b);
  switch (m) {
    case M::kAdd:
    case M::kAddu:
    case M::kAddi:
      return a + b;
    case M::kSub:
    case M::kSubu:
      return a - b;
    case M::kAnd:
    case M::kAndi:
      return a & b;
    case M::kOr:
    case M::kOri:
      return a | b;
    case M::kXor:
    case M::kXori:
      return a ^ b;
    case M::kNor:
      return ~(a | b);
    case M::kSrav:
    case M::kSra:
      return static_cast<uint32_t>(sa >> (b & 31));
    case M::kSrlv:
    case M::kSrl:
      return a >> (b & 31);
    case M::kSllv:
    case M::kSll:
      return a << (b & 31);
    case M::kSlt: return sa < sb;
    case M::kSltu: return a < b;
    case M::kSeq: return a == b;
    case M::kSne: return a != b;
    case M::kSle: return sa <= sb;
    case M::kSleu: return a <= b;
    case M::kMul:
    case M::kMulu:
      return a * b;
    case M::kDiv:
      if (b == 0) return 0xFFFFFFFFu;
      if (sa == std::numeric_limits<int32_t>::min() && sb == -1) return a;
      return static_cast<uint32_t>(sa / sb);
    case M::kDivu:
      if (b == 0) return 0xFFFFFFFFu;
      return a / b;
    default:
      return 0;
  }
}

uint32_t convert(CvtSpec spec, uint32_t value) {
  auto extend = [&](uint32_t v, int bits) -> uint32_t {
    if (bits >= 32) return v;
    uint32_t mask = (1u << bits) - 1;
    v &= mask;
    if (spec.sign && (v >> (bits - 1)) != 0) v |= ~mask;
    return v;
  };
  uint32_t v = extend(value, CvtSpec::bits(spec.src_width));
  return extend(v, CvtSpec::bits(spec.dst_width));
}

uint32_t compute_result(const Instruction& in, std::span<const uint32_t> src, uint32_t pc) {
  switch (in.mnemonic) {
    case M::kLli: return in.imm & 0xFFFF;
    case M::kLhi: return (in.imm << 16) | (src[0] & 0xFFFF);
    case M::kLoli: return src[0] | (in.imm & 0xFFFF);
    case M::kCvt: return convert(in.cvt, src[0]);
    case M::kJal: return pc + 1;
    case M::kAddi: return alu(in.mnemonic, src[0], static_cast<uint32_t>(imm8_signed(in)));
    case M::kAndi:
    case M::kOri:
    case M::kXori:
      return alu(in.mnemonic, src[0], in.imm & 0xFF);
    case M::kSra:
    case M::kSrl:
    case M::kSll:
      return alu(in.mnemonic, src[0], in.imm);
    default:
      return alu(in.mnemonic, src[0], src[1]);
  }
}

BranchOutcome resolve_control(const Instruction& in, std::span<const uint32_t> src,
                              uint32_t pc) {
  switch (in.mnemonic) {
    case M::kJ:
    case M::kJal:
      return {true, in.imm};
    case M::kJr:
      return {true, src[0]};
    case M::kBnez:
      return {src[0] != 0, static_cast<uint32_t>(static_cast<int64_t>(pc) + 1 + branch_offset(in))};
    case M::kBeqz:
      return {src[0] == 0, static_cast<uint32_t>(static_cast<int64_t>(pc) + 1 + branch_offset(in))};
    default:
      return {};
  }
}

std::optional<Fault> DataMemory::check(Mnemonic m, uint32_t addr) const {
  const uint32_t n = static_cast<uint32_t>(access_size(m));
  if (n > 1 && addr % n != 0) return Fault{FaultKind::kMisaligned, 0, addr, ""};
  if (static_cast<uint64_t>(addr) + n > bytes_.size()) {
    return Fault{FaultKind::kAddressRange, 0, addr, ""};
  }
  return std::nullopt;
}

uint32_t DataMemory::load(Mnemonic m, uint32_t addr) const {
  switch (m) {
    case M::kLw:
      return bytes_[addr] | bytes_[addr + 1] << 8 | bytes_[addr + 2] << 16 |
             static_cast<uint32_t>(bytes_[addr + 3]) << 24;
    case M::kLh:
      return static_cast<uint32_t>(
          static_cast<int16_t>(bytes_[addr] | bytes_[addr + 1] << 8));
    case M::kLhu:
      return bytes_[addr] | bytes_[addr + 1] << 8;
    case M::kLb:
      return static_cast<uint32_t>(static_cast<int8_t>(bytes_[addr]));
    case M::kLbu:
      return bytes_[addr];
    default:
      return 0;
  }
}

void DataMemory::store(Mnemonic m, uint32_t addr, uint32_t value) {
  const int n = access_size(m);
  for (int i = 0; i < n; ++i) bytes_[addr + i] = static_cast<uint8_t>(value >> (8 * i));
}

}  // namespace byorisc
