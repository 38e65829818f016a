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

#include "byorisc/lower.h"

#include <cctype>
#include <set>
#include <sstream>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {
namespace {

uint32_t as_word(int64_t v) { return static_cast<uint32_t>(v); }

void assign(RegisterMap& m, const MachineConfig& cfg, const std::string* name, uint32_t constant) {
  if (!name && constant == 0) return;
  if (name ? m.names.count(*name) : m.constants.count(constant)) return;
  if (m.next >= cfg.link_register()) {
    throw InputError("program needs more than " + std::to_string(cfg.link_register() - 1) +
                     " registers");
  }
  const auto r = static_cast<uint8_t>(m.next++);
  if (name) {
    m.names[*name] = r;
  } else {
    m.constants[constant] = r;
  }
}

std::string reg(int r) { return "r" + std::to_string(r); }

}  // namespace

std::string block_label(const std::string& label) {
  std::string out = "bb_";
  for (char c : label) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

RegisterMap build_register_map(const CdfgProgram& p, const MachineConfig& cfg, const RegisterMap* base) {
  RegisterMap m = base ? *base : RegisterMap{};
  for (const BasicBlock& bb : p.blocks) {
    for (const OpNode& op : bb.ops) {
      for (const ValueRef& in : op.inputs) {
        if (in.is_const()) {
          assign(m, cfg, nullptr, as_word(in.value));
        } else {
          assign(m, cfg, &in.name, 0);
        }
      }
      for (const std::string& out : op.outputs) assign(m, cfg, &out, 0);
    }
  }
  for (const std::string& name : p.live_at_exit) assign(m, cfg, &name, 0);
  return m;
}

LoweredProgram lower_iseq(const CdfgProgram& p, const MachineConfig& cfg, const RegisterMap* base) {
  LoweredProgram lp;
  lp.regs = build_register_map(p, cfg, base);
  const RegisterMap& m = lp.regs;
  auto value_reg = [&](const ValueRef& v) -> int {
    if (v.is_const()) {
      const uint32_t c = as_word(v.value);
      return c == 0 ? 0 : m.constants.at(c);
    }
    return m.names.at(v.name);
  };

  std::ostringstream o;
  o << "# proc " << p.name << "\n";
  std::vector<std::pair<uint32_t, std::vector<uint8_t>>> runs;
  uint32_t next = 0;
  for (const auto& [addr, b] : p.data) {
    if (runs.empty() || addr != next || runs.back().second.size() >= 16) runs.push_back({addr, {}});
    runs.back().second.push_back(b);
    next = addr + 1;
  }
  for (const auto& [addr, bytes] : runs) {
    o << ".data 0x" << hex(addr, 4);
    for (uint8_t b : bytes) o << " 0x" << hex(b, 2);
    o << "\n";
  }

  std::set<uint32_t> used;
  for (const BasicBlock& bb : p.blocks) {
    for (const OpNode& op : bb.ops) {
      for (const ValueRef& in : op.inputs) {
        if (in.is_const() && as_word(in.value) != 0) used.insert(as_word(in.value));
      }
    }
  }
  for (const auto& [c, r] : m.constants) {
    if (!used.count(c)) continue;
    o << "    lli " << reg(r) << ", 0x" << hex(c & 0xFFFF, 4) << "\n";
    ++lp.prologue;
    if (c >> 16) {
      o << "    lhi " << reg(r) << ", 0x" << hex(c >> 16, 4) << "\n";
      ++lp.prologue;
    }
  }

  int occ = 0;
  for (const BasicBlock& bb : p.blocks) {
    o << block_label(bb.label) << ":\n";
    for (const OpNode& op : bb.ops) {
      o << "    ";
      if (is_ci_opcode_name(op.opcode)) {
        if (occ > 255) throw InputError("more than 256 custom instruction occurrences");
        o << "ci " << op.opcode.substr(3) << ", occ=" << occ++ << ", out=(";
        for (size_t k = 0; k < op.outputs.size(); ++k) o << (k ? ", " : "") << reg(m.names.at(op.outputs[k]));
        o << "), in=(";
        for (size_t k = 0; k < op.inputs.size(); ++k) o << (k ? ", " : "") << reg(value_reg(op.inputs[k]));
        o << ")\n";
        continue;
      }
      const IrOpInfo* info = find_ir_op(op.opcode);
      const Mnemonic mn = info->machine;
      if (!is_supported(mn, cfg)) {
        throw InputError("op '" + op.opcode + "' in block '" + bb.label + "' needs instruction '" +
                         std::string(byorisc::info(mn).name) + "', which the configuration lacks");
      }
      const std::string name(byorisc::info(mn).name);
      switch (info->kind) {
        case IrKind::kAlu:
          o << name << " " << reg(m.names.at(op.outputs[0])) << ", " << reg(value_reg(op.inputs[0])) << ", "
            << reg(value_reg(op.inputs[1]));
          break;
        case IrKind::kMove:
          o << name << " " << reg(m.names.at(op.outputs[0])) << ", " << reg(value_reg(op.inputs[0])) << ", r0";
          break;
        case IrKind::kLoad:
          o << name << " " << reg(m.names.at(op.outputs[0])) << ", (" << reg(value_reg(op.inputs[0])) << ")";
          break;
        case IrKind::kStore:
          o << name << " " << reg(value_reg(op.inputs[0])) << ", (" << reg(value_reg(op.inputs[1])) << ")";
          break;
        case IrKind::kBranch:
          o << name << " " << reg(value_reg(op.inputs[0])) << ", " << block_label(op.target);
          break;
        case IrKind::kJump:
          o << name << " " << block_label(op.target);
          break;
        case IrKind::kCi:
          break;
      }
      o << "\n";
    }
  }
  o << "    halt\n";
  lp.assembly = o.str();
  return lp;
}

}  // namespace byorisc
