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

#include "byorisc/iss.h"

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {

using M = Mnemonic;

std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kHalted: return "halted";
    case RunStatus::kSyscall: return "syscall";
    case RunStatus::kBreak: return "break";
    case RunStatus::kTrap: return "trap";
    case RunStatus::kBudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

MachineState initial_state(const ProgramImage& image, const MachineConfig& cfg) {
  MachineState s;
  s.regs.assign(cfg.num_registers(), 0);
  s.dmem = DataMemory(cfg.dmem_size);
  for (const auto& [addr, b] : image.data_init) {
    if (addr >= cfg.dmem_size) {
      throw InputError("image initializes data byte " + std::to_string(addr) + " beyond DMEMSIZE");
    }
    s.dmem.set_byte(addr, b);
  }
  return s;
}

OperandInfo operand_info(const Instruction& in, uint32_t pc, const ProgramImage& image,
                         const MachineConfig& cfg, const CiLibrary& cilib) {
  OperandInfo oi;
  if (in.mnemonic != M::kCi) {
    oi.src = source_registers(in);
    if (auto d = dest_register(in, cfg)) oi.dst.push_back(*d);
    return oi;
  }
  auto sid = image.sid_table.find(in.ciocc);
  if (sid == image.sid_table.end()) {
    oi.fault = Fault{FaultKind::kMissingSid, pc, 0, "ciocc " + std::to_string(in.ciocc)};
    return oi;
  }
  oi.src = sid->second.src;
  oi.dst = sid->second.dst;
  auto bind = image.ci_bindings.find(in.opcode);
  const CiBehavior* ci = nullptr;
  if (bind != image.ci_bindings.end()) {
    auto it = cilib.find(bind->second);
    if (it != cilib.end()) ci = &it->second;
  }
  if (!ci) {
    oi.fault = Fault{FaultKind::kMissingCi, pc, 0,
                     bind == image.ci_bindings.end() ? "opcode 0x" + hex(in.opcode, 2)
                                                     : "'" + bind->second + "'"};
    return oi;
  }
  if (ci->n_in != static_cast<int>(oi.src.size()) || ci->n_out != static_cast<int>(oi.dst.size())) {
    oi.fault = Fault{FaultKind::kCiArity, pc, 0, "'" + ci->name + "' vs SID entry " +
                                                     std::to_string(in.ciocc)};
    return oi;
  }
  oi.ci = ci;
  return oi;
}

StepResult step_iss(MachineState& s, const ProgramImage& image, const MachineConfig& cfg,
                    const CiLibrary& cilib, const ZolcTable* zolc, ZolcState* zolc_state) {
  using Kind = StepResult::Kind;
  auto trap = [&](Fault f) {
    f.pc = s.pc;
    s.halted = true;
    return StepResult{Kind::kTrap, f};
  };
  if (s.pc >= image.code.size()) return trap({FaultKind::kFetchOutOfRange, s.pc, 0, ""});
  auto decoded = decode(image.code[s.pc], cfg);
  if (!decoded) return trap({FaultKind::kIllegalInstruction, s.pc, 0, "word 0x" + hex(image.code[s.pc], 8)});
  const Instruction& in = *decoded;
  const OpcodeInfo& info_ = info(in.mnemonic);
  if (info_.group == Group::kCP) return trap({FaultKind::kUnimplemented, s.pc, 0, "coprocessor"});
  switch (in.mnemonic) {
    case M::kHalt:
      s.halted = true;
      return {Kind::kHalt, std::nullopt};
    case M::kSyscal:
      s.halted = true;
      return {Kind::kSyscall, std::nullopt};
    case M::kBreak:
      s.halted = true;
      return {Kind::kBreak, std::nullopt};
    default:
      break;
  }

  OperandInfo ops = operand_info(in, s.pc, image, cfg, cilib);
  if (ops.fault) return trap(*ops.fault);
  std::vector<uint32_t> src;
  for (uint8_t r : ops.src) src.push_back(s.regs[r]);
  std::vector<uint32_t> dst_vals;
  uint32_t next = s.pc + 1;
  bool redirected = false;

  if (in.mnemonic == M::kCi) {
    if (auto f = execute_ci(*ops.ci, src, dst_vals, s.dmem)) return trap(*f);
  } else if (is_load(in.mnemonic)) {
    if (auto f = s.dmem.check(in.mnemonic, src[0])) return trap(*f);
    dst_vals.push_back(s.dmem.load(in.mnemonic, src[0]));
  } else if (is_store(in.mnemonic)) {
    if (auto f = s.dmem.check(in.mnemonic, src[0])) return trap(*f);
    s.dmem.store(in.mnemonic, src[0], src[1]);
  } else if (is_control_transfer(in.mnemonic)) {
    BranchOutcome b = resolve_control(in, src, s.pc);
    if (b.taken) {
      next = b.target;
      redirected = true;
    }
    if (in.mnemonic == M::kJal) dst_vals.push_back(s.pc + 1);
  } else {
    dst_vals.push_back(compute_result(in, src, s.pc));
  }
  if (zolc && zolc_state) {
    auto z = zolc_step(*zolc, *zolc_state, s.pc);
    if (z && !redirected) next = *z;
  }
  for (size_t k = 0; k < ops.dst.size(); ++k) {
    if (ops.dst[k] != 0) s.regs[ops.dst[k]] = dst_vals[k];
  }
  s.pc = next;
  return {Kind::kContinue, std::nullopt};
}

IssResult run_iss(const ProgramImage& image, const MachineConfig& cfg, const CiLibrary& cilib,
                  uint64_t max_steps, const ZolcTable* zolc) {
  if (max_steps == 0) throw InputError("max_steps must be positive");
  IssResult r;
  r.state = initial_state(image, cfg);
  ZolcState zs;
  if (zolc) zs = initial_zolc_state(*zolc);
  for (uint64_t i = 0; i < max_steps; ++i) {
    StepResult st = step_iss(r.state, image, cfg, cilib, zolc, zolc ? &zs : nullptr);
    switch (st.kind) {
      case StepResult::Kind::kContinue:
        ++r.retired;
        continue;
      case StepResult::Kind::kHalt:
        ++r.retired;
        r.status = RunStatus::kHalted;
        return r;
      case StepResult::Kind::kSyscall:
        ++r.retired;
        r.status = RunStatus::kSyscall;
        return r;
      case StepResult::Kind::kBreak:
        ++r.retired;
        r.status = RunStatus::kBreak;
        return r;
      case StepResult::Kind::kTrap:
        r.status = RunStatus::kTrap;
        r.fault = st.fault;
        return r;
    }
  }
  r.status = RunStatus::kBudgetExhausted;
  return r;
}

}  // namespace byorisc
