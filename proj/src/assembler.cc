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

#include "byorisc/assembler.h"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {
namespace {

using M = Mnemonic;

struct Operand {
  std::string text;
  int col = 1;
};

struct Statement {
  int line = 0;
  int col = 1;
  std::string op;  // lower-case mnemonic or directive
  std::vector<Operand> args;
  uint32_t pc = 0;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

// Splits on top-level commas so that "out=(r1,r2)" stays whole.
std::vector<Operand> split_operands(const std::string& s, int base_col) {
  std::vector<Operand> out;
  int depth = 0;
  size_t start = 0;
  auto flush = [&](size_t end) {
    std::string piece = s.substr(start, end - start);
    size_t lead = piece.find_first_not_of(" \t");
    std::string t(trim(piece));
    out.push_back({t, base_col + static_cast<int>(start + (lead == std::string::npos ? 0 : lead))});
  };
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  flush(s.size());
  if (out.size() == 1 && out[0].text.empty()) out.clear();
  return out;
}

class Assembler {
 public:
  Assembler(const MachineConfig& cfg, std::string name) : cfg_(cfg), name_(std::move(name)) {}

  ProgramImage run(const std::string& source) {
    img_.sid_ni = cfg_.have_ci ? cfg_.n_ci_inputs : 0;
    img_.sid_no = cfg_.have_ci ? cfg_.n_ci_outputs : 0;
    img_.sid_raw = cfg_.raw;
    first_pass(source);
    bind_ci_opcodes();
    second_pass();
    return img_;
  }

 private:
  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    throw ParseError(name_, line, col, msg);
  }
  [[noreturn]] void fail(const Statement& st, const Operand& a, const std::string& msg) const {
    fail(st.line, a.col, msg);
  }

  void first_pass(const std::string& source) {
    std::vector<std::string> lines = split(source, '\n');
    uint32_t pc = 0;
    for (size_t ln = 0; ln < lines.size(); ++ln) {
      const int line = static_cast<int>(ln + 1);
      std::string raw(strip_comment(lines[ln]));
      size_t i = 0;
      auto skip_ws = [&] {
        while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      };
      for (;;) {
        skip_ws();
        size_t j = i;
        if (j < raw.size() && is_ident_start(raw[j])) {
          while (j < raw.size() && is_ident_char(raw[j])) ++j;
          if (j < raw.size() && raw[j] == ':') {
            std::string label = raw.substr(i, j - i);
            if (img_.labels.count(label)) fail(line, static_cast<int>(i + 1), "duplicate label '" + label + "'");
            img_.labels[label] = pc;
            i = j + 1;
            continue;
          }
        }
        break;
      }
      skip_ws();
      if (i >= raw.size()) continue;
      Statement st;
      st.line = line;
      st.col = static_cast<int>(i + 1);
      size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      st.op = to_lower(raw.substr(i, j - i));
      st.args = split_operands(raw.substr(j), static_cast<int>(j + 1));
      st.pc = pc;

      if (st.op == ".org") {
        need_args(st, 1);
        int64_t target = imm(st, st.args[0], 0, int64_t{1} << 30);
        if (target < pc) fail(st, st.args[0], ".org moves backwards");
        pc = static_cast<uint32_t>(target);
      } else if (st.op == ".word") {
        need_args(st, 1);
        ++pc;
      } else if (st.op == ".data") {
        handle_data(st);
      } else if (st.op == ".cidef") {
        handle_cidef(st);
      } else if (st.op == ".ci") {
        handle_sid(st, true);
      } else if (st.op == "ci") {
        handle_sid(st, false);
        ++pc;
      } else if (st.op[0] == '.') {
        fail(line, st.col, "unknown directive '" + st.op + "'");
      } else {
        if (!find_mnemonic(st.op)) fail(line, st.col, "unknown mnemonic '" + st.op + "'");
        ++pc;
      }
      stmts_.push_back(std::move(st));
    }
    end_pc_ = pc;
    if (end_pc_ > cfg_.imem_words()) {
      fail(lines.empty() ? 1 : static_cast<int>(lines.size()), 1,
           "program of " + std::to_string(end_pc_) + " words exceeds instruction memory");
    }
    for (const auto& [label, addr] : img_.labels) {
      if (addr > end_pc_) fail(1, 1, "label '" + label + "' outside code");
    }
  }

  void need_args(const Statement& st, size_t n) const {
    if (st.args.size() != n) {
      fail(st.line, st.col, "'" + st.op + "' expects " + std::to_string(n) + " operand(s), got " +
                                std::to_string(st.args.size()));
    }
  }

  int64_t imm(const Statement& st, const Operand& a, int64_t lo, int64_t hi) const {
    auto v = parse_int(a.text);
    if (!v) fail(st, a, "expected an integer, got '" + a.text + "'");
    if (*v < lo || *v > hi) fail(st, a, "value " + a.text + " out of range");
    return *v;
  }

  uint8_t reg(const Statement& st, const Operand& a) const {
    return reg_text(st, a, a.text);
  }

  uint8_t reg_text(const Statement& st, const Operand& a, const std::string& text) const {
    std::string t = to_lower(trim(text));
    if (t.size() < 2 || t[0] != 'r') fail(st, a, "expected a register, got '" + text + "'");
    auto v = parse_int(t.substr(1));
    if (!v || t[1] == '-' || t[1] == '+' || !std::isdigit(static_cast<unsigned char>(t[1]))) {
      fail(st, a, "expected a register, got '" + text + "'");
    }
    if (*v < 0 || static_cast<uint32_t>(*v) >= cfg_.num_registers()) {
      fail(st, a, "register " + text + " exceeds " + std::to_string(cfg_.num_registers()) + " registers");
    }
    return static_cast<uint8_t>(*v);
  }

  std::vector<uint8_t> reg_list(const Statement& st, const Operand& a, const std::string& body) const {
    std::vector<uint8_t> regs;
    std::string inner(trim(body));
    if (inner.size() < 2 || inner.front() != '(' || inner.back() != ')') {
      fail(st, a, "expected a parenthesized register list");
    }
    inner = inner.substr(1, inner.size() - 2);
    if (trim(inner).empty()) return regs;
    for (const std::string& item : split(inner, ',')) {
      size_t dots = item.find("..");
      if (dots != std::string::npos) {
        uint8_t lo = reg_text(st, a, item.substr(0, dots));
        uint8_t hi = reg_text(st, a, item.substr(dots + 2));
        if (hi < lo) fail(st, a, "descending register range '" + item + "'");
        for (int r = lo; r <= hi; ++r) regs.push_back(static_cast<uint8_t>(r));
      } else {
        regs.push_back(reg_text(st, a, item));
      }
    }
    return regs;
  }

  // "(rX)" for loads and stores.
  uint8_t indirect(const Statement& st, const Operand& a) const {
    std::string t(trim(a.text));
    if (t.size() < 3 || t.front() != '(' || t.back() != ')') fail(st, a, "expected (rN)");
    return reg_text(st, a, t.substr(1, t.size() - 2));
  }

  int64_t address(const Statement& st, const Operand& a) const {
    const std::string& t = a.text;
    if (t == ".") return st.pc;
    if (t.size() > 1 && t[0] == '.' && (t[1] == '+' || t[1] == '-')) {
      auto v = parse_int(t.substr(1));
      if (!v) fail(st, a, "bad relative address '" + t + "'");
      return static_cast<int64_t>(st.pc) + *v;
    }
    if (auto v = parse_int(t)) return *v;
    auto it = img_.labels.find(t);
    if (it == img_.labels.end()) fail(st, a, "undefined label '" + t + "'");
    return it->second;
  }

  void handle_data(const Statement& st) {
    if (st.args.empty()) fail(st.line, st.col, ".data needs an address");
    // ".data addr b0 b1 ..." with optional commas.
    std::vector<Operand> items;
    for (const auto& a : st.args) {
      for (const auto& t : split_ws(a.text)) items.push_back({t, a.col});
    }
    int64_t addr = imm(st, items[0], 0, int64_t{cfg_.dmem_size} - 1);
    for (size_t k = 1; k < items.size(); ++k) {
      int64_t b = imm(st, items[k], -128, 255);
      uint32_t at = static_cast<uint32_t>(addr) + static_cast<uint32_t>(k - 1);
      if (at >= cfg_.dmem_size) fail(st, items[k], "data byte beyond data memory");
      img_.data_init[at] = static_cast<uint8_t>(b);
    }
  }

  void handle_cidef(const Statement& st) {
    std::vector<Operand> items;
    for (const auto& a : st.args) {
      for (const auto& t : split_ws(a.text)) items.push_back({t, a.col});
    }
    if (items.size() != 2) fail(st.line, st.col, ".cidef expects a name and an opcode");
    int64_t opc = imm(st, items[1], 0, 255);
    if (!is_ci_opcode(static_cast<uint8_t>(opc)) || opc >= (int64_t{1} << cfg_.ow)) {
      fail(st, items[1], "opcode " + items[1].text + " is not in the CI region");
    }
    const std::string& name = items[0].text;
    if (explicit_ci_.count(name) && explicit_ci_[name] != opc) {
      fail(st, items[0], "CI '" + name + "' bound twice");
    }
    for (const auto& [n, o] : explicit_ci_) {
      if (o == opc && n != name) fail(st, items[1], "opcode already bound to CI '" + n + "'");
    }
    explicit_ci_[name] = static_cast<uint8_t>(opc);
  }

  // Parses "<name>, occ=N[, out=(...), in=(...)]" and records the SID entry.
  void handle_sid(Statement& st, bool directive) {
    if (!cfg_.have_ci) fail(st.line, st.col, "custom instructions need HAVE_CI");
    if (st.args.empty()) fail(st.line, st.col, "missing CI name");
    const std::string& name = st.args[0].text;
    if (name.empty() || !is_ident_start(name[0])) fail(st, st.args[0], "bad CI name '" + name + "'");
    std::optional<int64_t> occ;
    std::optional<std::vector<uint8_t>> outs, ins;
    for (size_t k = 1; k < st.args.size(); ++k) {
      const Operand& a = st.args[k];
      size_t eq = a.text.find('=');
      if (eq == std::string::npos) fail(st, a, "expected key=value, got '" + a.text + "'");
      std::string key = to_lower(trim(a.text.substr(0, eq)));
      std::string val(trim(a.text.substr(eq + 1)));
      if (key == "occ") {
        occ = imm(st, {val, a.col}, 0, 255);
      } else if (key == "out") {
        outs = reg_list(st, a, val);
      } else if (key == "in") {
        ins = reg_list(st, a, val);
      } else {
        fail(st, a, "unknown CI field '" + key + "'");
      }
    }
    if (!occ) fail(st.line, st.col, "CI needs occ=N");
    if (directive && (!outs || !ins)) fail(st.line, st.col, ".ci needs out=(...) and in=(...)");
    if (outs.has_value() != ins.has_value()) fail(st.line, st.col, "give both out= and in= or neither");
    if (!directive) {
      ci_uses_.push_back(name);
      occ_of_stmt_[stmts_.size()] = static_cast<uint8_t>(*occ);
    }
    if (!outs) return;
    if (static_cast<int>(outs->size()) > cfg_.n_ci_outputs) {
      fail(st.line, st.col, std::to_string(outs->size()) + " CI outputs exceed N_CI_OUTPUTS=" +
                                std::to_string(cfg_.n_ci_outputs));
    }
    if (static_cast<int>(ins->size()) > cfg_.n_ci_inputs) {
      fail(st.line, st.col, std::to_string(ins->size()) + " CI inputs exceed N_CI_INPUTS=" +
                                std::to_string(cfg_.n_ci_inputs));
    }
    SidEntry e{*outs, *ins};
    auto occ8 = static_cast<uint8_t>(*occ);
    auto it = img_.sid_table.find(occ8);
    if (it != img_.sid_table.end() && !(it->second == e)) {
      fail(st.line, st.col, "occ=" + std::to_string(*occ) + " reused with different operands");
    }
    img_.sid_table[occ8] = e;
  }

  void bind_ci_opcodes() {
    std::set<uint8_t> used;
    for (const auto& [name, opc] : explicit_ci_) {
      img_.ci_bindings[opc] = name;
      used.insert(opc);
    }
    unsigned next = kCiOpcodeBase;
    for (const std::string& name : ci_uses_) {
      if (explicit_ci_.count(name)) continue;
      explicit_ci_[name] = 0;  // marks as bound below
      while (used.count(static_cast<uint8_t>(next))) ++next;
      if (next >= (1u << cfg_.ow)) throw InputError("out of CI opcodes");
      explicit_ci_[name] = static_cast<uint8_t>(next);
      img_.ci_bindings[static_cast<uint8_t>(next)] = name;
      used.insert(static_cast<uint8_t>(next));
    }
  }

  void second_pass() {
    img_.code.assign(end_pc_, 0);
    for (size_t si = 0; si < stmts_.size(); ++si) {
      Statement& st = stmts_[si];
      if (st.op == ".word") {
        img_.code[st.pc] = static_cast<uint32_t>(imm(st, st.args[0], INT32_MIN, UINT32_MAX));
        continue;
      }
      if (st.op[0] == '.') continue;
      Instruction in = build(st, si);
      try {
        img_.code[st.pc] = encode(in, cfg_);
      } catch (const ParseError&) {
        throw;
      } catch (const InputError& e) {
        fail(st.line, st.col, e.what());
      }
    }
  }

  Instruction build(const Statement& st, size_t si) {
    if (st.op == "ci") {
      uint8_t occ = occ_of_stmt_.at(si);
      if (!img_.sid_table.count(occ)) {
        fail(st.line, st.col, "occ=" + std::to_string(occ) + " has no SID entry");
      }
      return make_ci(explicit_ci_.at(st.args[0].text), occ);
    }
    const OpcodeInfo* oi = find_mnemonic(st.op);
    const M m = oi->mnemonic;
    const auto& a = st.args;
    switch (oi->shape) {
      case Shape::kNone:
        need_args(st, 0);
        {
          Instruction in;
          in.mnemonic = m;
          in.opcode = oi->opcode;
          return in;
        }
      case Shape::kRRR:
        need_args(st, 3);
        return make_rrr(m, reg(st, a[0]), reg(st, a[1]), reg(st, a[2]));
      case Shape::kRRImm8: {
        need_args(st, 3);
        int64_t v = m == M::kAddi ? imm(st, a[2], -128, 127) : imm(st, a[2], 0, 255);
        return make_rr_imm(m, reg(st, a[0]), reg(st, a[1]), static_cast<uint32_t>(v) & 0xFF);
      }
      case Shape::kRRShamt:
      case Shape::kCop:
        need_args(st, 3);
        return make_rr_imm(m, reg(st, a[0]), reg(st, a[1]),
                           static_cast<uint32_t>(imm(st, a[2], 0, 31)));
      case Shape::kRImm16: {
        need_args(st, 2);
        int64_t v = parse_int(a[1].text) ? imm(st, a[1], -32768, 65535) : address(st, a[1]);
        if (v < -32768 || v > 65535) fail(st, a[1], "value out of 16-bit range");
        return make_imm16(m, reg(st, a[0]), static_cast<uint32_t>(v) & 0xFFFF);
      }
      case Shape::kLoad:
        need_args(st, 2);
        return make_load(m, reg(st, a[0]), indirect(st, a[1]));
      case Shape::kStore:
        need_args(st, 2);
        return make_store(m, reg(st, a[0]), indirect(st, a[1]));
      case Shape::kBranch: {
        need_args(st, 2);
        int64_t off = address(st, a[1]) - (static_cast<int64_t>(st.pc) + 1);
        if (off < -32768 || off > 32767) fail(st, a[1], "branch target out of range");
        return make_branch(m, reg(st, a[0]), static_cast<int32_t>(off));
      }
      case Shape::kJump: {
        need_args(st, 1);
        int64_t t = address(st, a[0]);
        if (t < 0 || t >= (1 << 24)) fail(st, a[0], "jump target out of range");
        return make_jump(m, static_cast<uint32_t>(t));
      }
      case Shape::kJumpReg:
        need_args(st, 1);
        return make_jr(reg(st, a[0]));
      case Shape::kCvt: {
        need_args(st, 5);
        CvtSpec spec;
        std::string sign = to_lower(a[2].text);
        if (sign != "s" && sign != "u") fail(st, a[2], "expected s or u");
        spec.sign = sign == "s";
        auto width = [&](const Operand& o) -> uint8_t {
          int64_t w = imm(st, o, 8, 32);
          if (w == 8) return 0;
          if (w == 16) return 1;
          if (w == 32) return 2;
          fail(st, o, "width must be 8, 16 or 32");
        };
        spec.src_width = width(a[3]);
        spec.dst_width = width(a[4]);
        return make_cvt(reg(st, a[0]), reg(st, a[1]), spec);
      }
      case Shape::kCi:
        break;
    }
    fail(st.line, st.col, "cannot assemble '" + st.op + "'");
  }

  const MachineConfig& cfg_;
  std::string name_;
  ProgramImage img_;
  std::vector<Statement> stmts_;
  std::map<std::string, uint8_t> explicit_ci_;
  std::vector<std::string> ci_uses_;
  std::map<size_t, uint8_t> occ_of_stmt_;
  uint32_t end_pc_ = 0;
};

std::string reg_list_text(const std::vector<uint8_t>& regs) {
  std::string s = "(";
  for (size_t k = 0; k < regs.size(); ++k) {
    if (k) s += ", ";
    s += "r" + std::to_string(regs[k]);
  }
  return s + ")";
}

std::string ci_name(const ProgramImage* image, uint8_t opcode) {
  if (image) {
    auto it = image->ci_bindings.find(opcode);
    if (it != image->ci_bindings.end()) return it->second;
  }
  return "ci_" + to_lower(hex(opcode, 2));
}

std::string target_text(int64_t target, uint32_t pc,
                        const std::map<uint32_t, std::string>* names) {
  if (target < 0) return ".-" + std::to_string(static_cast<int64_t>(pc) - target);
  if (names) {
    auto it = names->find(static_cast<uint32_t>(target));
    if (it != names->end()) return it->second;
  }
  return std::to_string(target);
}

std::string format_with(const Instruction& in, uint32_t pc, const ProgramImage* image,
                        const std::map<uint32_t, std::string>* names) {
  const OpcodeInfo& oi = info(in.mnemonic);
  auto r = [](int x) { return "r" + std::to_string(x); };
  std::string n(oi.name);
  switch (oi.shape) {
    case Shape::kNone:
      return n;
    case Shape::kRRR:
      return n + " " + r(in.rd) + ", " + r(in.rs) + ", " + r(in.rt);
    case Shape::kRRImm8:
      if (in.mnemonic == M::kAddi) {
        return n + " " + r(in.rd) + ", " + r(in.rs) + ", " + std::to_string(imm8_signed(in));
      }
      return n + " " + r(in.rd) + ", " + r(in.rs) + ", " + std::to_string(in.imm);
    case Shape::kRRShamt:
    case Shape::kCop:
      return n + " " + r(in.rd) + ", " + r(in.rs) + ", " + std::to_string(in.imm);
    case Shape::kRImm16:
      return n + " " + r(in.rd) + ", 0x" + hex(in.imm, 4);
    case Shape::kLoad:
      return n + " " + r(in.rd) + ", (" + r(in.rs) + ")";
    case Shape::kStore:
      return n + " " + r(in.rt) + ", (" + r(in.rs) + ")";
    case Shape::kBranch:
      return n + " " + r(in.rs) + ", " +
             target_text(static_cast<int64_t>(pc) + 1 + branch_offset(in), pc, names);
    case Shape::kJump:
      return n + " " + target_text(in.imm, pc, names);
    case Shape::kJumpReg:
      return n + " " + r(in.rs);
    case Shape::kCvt:
      return n + " " + r(in.rd) + ", " + r(in.rs) + ", " + (in.cvt.sign ? "s" : "u") + ", " +
             std::to_string(CvtSpec::bits(in.cvt.src_width)) + ", " +
             std::to_string(CvtSpec::bits(in.cvt.dst_width));
    case Shape::kCi: {
      std::string s = "ci " + ci_name(image, in.opcode) + ", occ=" + std::to_string(in.ciocc);
      if (image) {
        auto it = image->sid_table.find(in.ciocc);
        if (it != image->sid_table.end()) {
          s += ", out=" + reg_list_text(it->second.dst) + ", in=" + reg_list_text(it->second.src);
        }
      }
      return s;
    }
  }
  return n;
}

}  // namespace

ProgramImage assemble(const std::string& source, const MachineConfig& cfg,
                      const std::string& source_name) {
  return Assembler(cfg, source_name).run(source);
}

std::string format_instruction(const Instruction& in, uint32_t pc, const ProgramImage* image) {
  return format_with(in, pc, image, nullptr);
}

std::string disassemble(const ProgramImage& image, const MachineConfig& cfg) {
  std::ostringstream o;
  std::map<uint32_t, std::string> first_label;
  std::multimap<uint32_t, std::string> all_labels;
  for (const auto& [name, addr] : image.labels) {
    all_labels.emplace(addr, name);
    first_label.emplace(addr, name);
  }

  std::vector<std::optional<Instruction>> decoded;
  std::set<uint8_t> referenced_occ;
  std::map<uint8_t, std::string> bindings = image.ci_bindings;
  for (uint32_t w : image.code) {
    auto in = decode(w, cfg);
    if (in && in->mnemonic == M::kCi) {
      if (!image.sid_table.count(in->ciocc)) {
        in.reset();  // unreassemblable without its SID entry
      } else {
        referenced_occ.insert(in->ciocc);
        if (!bindings.count(in->opcode)) bindings[in->opcode] = ci_name(nullptr, in->opcode);
      }
    }
    decoded.push_back(in);
  }
  ProgramImage named = image;
  named.ci_bindings = bindings;

  for (const auto& [opc, name] : bindings) o << ".cidef " << name << " 0x" << hex(opc, 2) << "\n";
  for (const auto& [occ, e] : image.sid_table) {
    if (referenced_occ.count(occ)) continue;
    o << ".ci unused, occ=" << int(occ) << ", out=" << reg_list_text(e.dst)
      << ", in=" << reg_list_text(e.src) << "\n";
  }
  std::vector<std::pair<uint32_t, std::vector<uint8_t>>> runs;
  uint32_t next = 0;
  for (const auto& [addr, b] : image.data_init) {
    if (runs.empty() || addr != next || runs.back().second.size() >= 16) runs.push_back({addr, {}});
    runs.back().second.push_back(b);
    next = addr + 1;
  }
  for (const auto& [addr, bytes] : runs) {
    o << ".data 0x" << hex(addr, 4);
    for (uint8_t b : bytes) o << " 0x" << hex(b, 2);
    o << "\n";
  }
  for (uint32_t pc = 0; pc <= image.code.size(); ++pc) {
    auto [lo, hi] = all_labels.equal_range(pc);
    for (auto it = lo; it != hi; ++it) o << it->second << ":\n";
    if (pc == image.code.size()) break;
    if (decoded[pc]) {
      o << "    " << format_with(*decoded[pc], pc, &named, &first_label) << "\n";
    } else {
      o << "    .word 0x" << hex(image.code[pc], 8) << "\n";
    }
  }
  return o.str();
}

}  // namespace byorisc
