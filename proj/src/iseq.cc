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

#include "byorisc/iseq.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {
namespace {

using M = Mnemonic;
using K = IrKind;

constexpr IrOpInfo kIrOps[] = {
    {"add", K::kAlu, 2, 1, M::kAdd, M::kAdd, true},
    {"addu", K::kAlu, 2, 1, M::kAddu, M::kAddu, true},
    {"sub", K::kAlu, 2, 1, M::kSub, M::kSub, false},
    {"subu", K::kAlu, 2, 1, M::kSubu, M::kSubu, false},
    {"and", K::kAlu, 2, 1, M::kAnd, M::kAnd, true},
    {"or", K::kAlu, 2, 1, M::kOr, M::kOr, true},
    {"xor", K::kAlu, 2, 1, M::kXor, M::kXor, true},
    {"nor", K::kAlu, 2, 1, M::kNor, M::kNor, true},
    {"slt", K::kAlu, 2, 1, M::kSlt, M::kSlt, false},
    {"sltu", K::kAlu, 2, 1, M::kSltu, M::kSltu, false},
    {"seq", K::kAlu, 2, 1, M::kSeq, M::kSeq, true},
    {"sne", K::kAlu, 2, 1, M::kSne, M::kSne, true},
    {"sle", K::kAlu, 2, 1, M::kSle, M::kSle, false},
    {"sleu", K::kAlu, 2, 1, M::kSleu, M::kSleu, false},
    {"mul", K::kAlu, 2, 1, M::kMul, M::kMul, true},
    {"mulu", K::kAlu, 2, 1, M::kMulu, M::kMulu, true},
    {"div", K::kAlu, 2, 1, M::kDiv, M::kDiv, false},
    {"divu", K::kAlu, 2, 1, M::kDivu, M::kDivu, false},
    {"srav", K::kAlu, 2, 1, M::kSrav, M::kSrav, false},
    {"srlv", K::kAlu, 2, 1, M::kSrlv, M::kSrlv, false},
    {"sllv", K::kAlu, 2, 1, M::kSllv, M::kSllv, false},
    {"sra", K::kAlu, 2, 1, M::kSra, M::kSrav, false},
    {"srl", K::kAlu, 2, 1, M::kSrl, M::kSrlv, false},
    {"sll", K::kAlu, 2, 1, M::kSll, M::kSllv, false},
    {"addi", K::kAlu, 2, 1, M::kAddi, M::kAdd, true},
    {"andi", K::kAlu, 2, 1, M::kAndi, M::kAnd, true},
    {"ori", K::kAlu, 2, 1, M::kOri, M::kOr, true},
    {"xori", K::kAlu, 2, 1, M::kXori, M::kXor, true},
    {"li", K::kMove, 1, 1, M::kOr, M::kOr, false},
    {"mov", K::kMove, 1, 1, M::kOr, M::kOr, false},
    {"lw", K::kLoad, 1, 1, M::kLw, M::kLw, false},
    {"lh", K::kLoad, 1, 1, M::kLh, M::kLh, false},
    {"lhu", K::kLoad, 1, 1, M::kLhu, M::kLhu, false},
    {"lb", K::kLoad, 1, 1, M::kLb, M::kLb, false},
    {"lbu", K::kLoad, 1, 1, M::kLbu, M::kLbu, false},
    {"sw", K::kStore, 2, 0, M::kSw, M::kSw, false},
    {"sh", K::kStore, 2, 0, M::kSh, M::kSh, false},
    {"sb", K::kStore, 2, 0, M::kSb, M::kSb, false},
    {"bnez", K::kBranch, 1, 0, M::kBnez, M::kBnez, false},
    {"beqz", K::kBranch, 1, 0, M::kBeqz, M::kBeqz, false},
    {"j", K::kJump, 0, 0, M::kJ, M::kJ, false},
};

constexpr IrOpInfo kCiOp = {"ci", K::kCi, -1, -1, M::kCi, M::kCi, false};

struct Token {
  std::string text;
  int col;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
      continue;
    }
    if (c == '=') {
      out.push_back({"=", static_cast<int>(i + 1)});
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != ',' && line[j] != '=') {
      ++j;
    }
    out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i + 1)});
    i = j;
  }
  return out;
}

bool is_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

int64_t normalize_const(int64_t v) { return static_cast<int32_t>(static_cast<uint32_t>(v)); }

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    throw ParseError(source_, line, col, msg);
  }

  int64_t number(int line, const Token& t, std::string_view what) const {
    auto v = parse_int(t.text);
    if (!v) fail(line, t.col, "expected " + std::string(what) + ", got '" + t.text + "'");
    return *v;
  }

  ValueRef operand(int line, const Token& t) const {
    if (!t.text.empty() && t.text[0] == '$') {
      auto v = parse_int(t.text.substr(1));
      if (!v || *v < INT32_MIN || *v > static_cast<int64_t>(UINT32_MAX)) {
        fail(line, t.col, "bad constant '" + t.text + "'");
      }
      return ValueRef::constant(normalize_const(*v));
    }
    if (!is_name(t.text)) fail(line, t.col, "bad operand '" + t.text + "'");
    return ValueRef::reg(t.text);
  }

  // "[outs =] op ins [@label]"
  OpNode op_line(int line, const std::vector<Token>& toks) const {
    OpNode op;
    op.line = line;
    size_t eq = toks.size();
    for (size_t k = 0; k < toks.size(); ++k) {
      if (toks[k].text == "=") {
        eq = k;
        break;
      }
    }
    size_t opi = 0;
    if (eq != toks.size()) {
      if (eq == 0) fail(line, toks[0].col, "missing output before '='");
      for (size_t k = 0; k < eq; ++k) {
        if (!is_name(toks[k].text)) fail(line, toks[k].col, "bad output name '" + toks[k].text + "'");
        op.outputs.push_back(toks[k].text);
      }
      opi = eq + 1;
      if (opi >= toks.size()) fail(line, toks[eq].col, "missing opcode after '='");
    }
    op.opcode = to_lower(toks[opi].text);
    const IrOpInfo* info = is_ci_opcode_name(op.opcode) ? &kCiOp : find_ir_op(op.opcode);
    if (!info) fail(line, toks[opi].col, "unknown opcode '" + toks[opi].text + "'");
    for (size_t k = opi + 1; k < toks.size(); ++k) {
      const Token& t = toks[k];
      if (t.text == "=") fail(line, t.col, "unexpected '='");
      if (t.text[0] == '@') {
        if (!op.target.empty()) fail(line, t.col, "more than one target label");
        op.target = t.text.substr(1);
        if (!is_name(op.target)) fail(line, t.col, "bad target label '" + t.text + "'");
        continue;
      }
      op.inputs.push_back(operand(line, t));
    }
    op.is_cti = info->kind == K::kBranch || info->kind == K::kJump;
    op.is_mem = info->kind == K::kLoad || info->kind == K::kStore;
    if (op.is_cti != !op.target.empty()) {
      fail(line, toks[opi].col, op.is_cti ? "control transfer needs an @label target"
                                          : "only control transfers take a target");
    }
    if (info->kind != K::kCi) {
      if (static_cast<int>(op.inputs.size()) != info->n_in) {
        fail(line, toks[opi].col, "'" + op.opcode + "' takes " + std::to_string(info->n_in) +
                                      " input(s), got " + std::to_string(op.inputs.size()));
      }
      if (static_cast<int>(op.outputs.size()) != info->n_out) {
        fail(line, toks[opi].col, "'" + op.opcode + "' has " + std::to_string(info->n_out) +
                                      " output(s), got " + std::to_string(op.outputs.size()));
      }
    }
    return op;
  }

  CiBehavior ci_header(int line, const std::vector<Token>& t) const {
    // ci <name> in N out M cycles H [mem s0 s1 ...]
    if (t.size() < 8 || t[2].text != "in" || t[4].text != "out" || t[6].text != "cycles") {
      fail(line, t[0].col, "expected 'ci <name> in N out M cycles H [mem ...]'");
    }
    CiBehavior ci;
    ci.name = t[1].text;
    if (!is_name(ci.name) || ci.name.find('.') != std::string::npos) {
      fail(line, t[1].col, "bad CI name '" + ci.name + "'");
    }
    ci.n_in = static_cast<int>(number(line, t[3], "input count"));
    ci.n_out = static_cast<int>(number(line, t[5], "output count"));
    ci.hw_cycles = static_cast<int>(number(line, t[7], "cycle count"));
    if (ci.n_in < 0 || ci.n_in > 8 || ci.n_out < 0 || ci.n_out > 8) {
      fail(line, t[3].col, "CI operand counts must be within 0..8");
    }
    if (ci.hw_cycles < 1) fail(line, t[7].col, "CI needs at least one cycle");
    if (t.size() > 8) {
      if (t[8].text != "mem") fail(line, t[8].col, "expected 'mem'");
      for (size_t k = 9; k < t.size(); ++k) {
        if (t[k].text != "-" && t[k].text != "L" && t[k].text != "S") {
          fail(line, t[k].col, "memory state must be -, L or S");
        }
        ci.mem_states += t[k].text;
      }
      if (static_cast<int>(ci.mem_states.size()) != ci.hw_cycles) {
        fail(line, t[8].col, "need one memory state per CI cycle");
      }
    } else {
      ci.mem_states.assign(ci.hw_cycles, '-');
    }
    return ci;
  }

  void check_ci(CiBehavior& ci, int line) const {
    std::set<std::string> defined;
    for (int k = 0; k < ci.n_in; ++k) defined.insert("i" + std::to_string(k));
    auto check_ref = [&](const ValueRef& r, int l) {
      if (!r.is_const() && !defined.count(r.name)) {
        fail(l, 1, "CI '" + ci.name + "' reads undefined value '" + r.name + "'");
      }
    };
    int loads = 0, stores = 0;
    for (size_t k = 0; k < ci.body.size(); ++k) {
      OpNode& op = ci.body[k];
      op.id = static_cast<int>(k);
      const IrOpInfo* info = find_ir_op(op.opcode);
      if (!info || op.is_cti) fail(op.line, 1, "'" + op.opcode + "' not allowed in a CI body");
      loads += info->kind == K::kLoad;
      stores += info->kind == K::kStore;
      for (const auto& r : op.inputs) check_ref(r, op.line);
      for (const auto& o : op.outputs) {
        if (defined.count(o)) fail(op.line, 1, "value '" + o + "' defined twice in CI '" + ci.name + "'");
        if (o.empty() || o[0] != 't') fail(op.line, 1, "CI temporaries must be named tK");
        defined.insert(o);
      }
    }
    for (const auto& r : ci.ret) check_ref(r, line);
    if (static_cast<int>(ci.ret.size()) != ci.n_out) {
      fail(line, 1, "CI '" + ci.name + "' returns " + std::to_string(ci.ret.size()) +
                        " value(s), header says " + std::to_string(ci.n_out));
    }
    if (std::count(ci.mem_states.begin(), ci.mem_states.end(), 'L') != loads ||
        std::count(ci.mem_states.begin(), ci.mem_states.end(), 'S') != stores) {
      fail(line, 1, "memory states of CI '" + ci.name + "' do not match its loads and stores");
    }
  }

  // Parses "ci ... endci" starting at lines[i]; advances i past endci.
  CiBehavior ci_block(const std::vector<std::string>& lines, size_t& i) const {
    int header_line = static_cast<int>(i + 1);
    CiBehavior ci = ci_header(header_line, tokenize(strip_comment(lines[i])));
    ++i;
    for (; i < lines.size(); ++i) {
      int line = static_cast<int>(i + 1);
      auto t = tokenize(strip_comment(lines[i]));
      if (t.empty()) continue;
      if (t[0].text == "endci") {
        check_ci(ci, line);
        ++i;
        return ci;
      }
      if (t[0].text == "ret") {
        for (size_t k = 1; k < t.size(); ++k) ci.ret.push_back(operand(line, t[k]));
        continue;
      }
      ci.body.push_back(op_line(line, t));
    }
    fail(header_line, 1, "missing endci");
  }

  const std::string source_;
};

std::string name_list(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}

std::string op_text(const OpNode& op) {
  std::string s;
  if (!op.outputs.empty()) s = name_list(op.outputs) + " = ";
  s += op.opcode;
  for (const auto& in : op.inputs) s += " " + in.text();
  if (!op.target.empty()) s += " @" + op.target;
  return s;
}

}  // namespace

std::span<const IrOpInfo> ir_op_table() { return kIrOps; }

const IrOpInfo* find_ir_op(std::string_view opcode) {
  for (const auto& e : kIrOps) {
    if (e.name == opcode) return &e;
  }
  return nullptr;
}

std::string ValueRef::text() const {
  return is_const() ? "$" + std::to_string(value) : name;
}

bool CiBehavior::has_memory() const {
  return mem_states.find_first_not_of('-') != std::string::npos;
}

int CdfgProgram::block_index(const std::string& label) const {
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

CdfgProgram parse_iseq(const std::string& text, const std::string& source) {
  Parser ps(source);
  CdfgProgram prog;
  std::vector<std::string> lines = split(text, '\n');
  bool in_proc = false, ended = false;
  BasicBlock* bb = nullptr;
  std::set<std::string> block_defs;
  std::map<std::string, int> block_lines;

  for (size_t i = 0; i < lines.size();) {
    const int line = static_cast<int>(i + 1);
    auto t = tokenize(strip_comment(lines[i]));
    if (t.empty()) {
      ++i;
      continue;
    }
    const std::string& kw = t[0].text;
    if (ended) ps.fail(line, t[0].col, "text after 'end'");
    if (kw == "proc") {
      if (in_proc) ps.fail(line, t[0].col, "nested 'proc'");
      if (t.size() != 2 || !is_name(t[1].text)) ps.fail(line, t[0].col, "expected 'proc <name>'");
      prog.name = t[1].text;
      in_proc = true;
      ++i;
      continue;
    }
    if (!in_proc) ps.fail(line, t[0].col, "expected 'proc <name>' first");
    if (kw == "end") {
      if (t.size() != 1) ps.fail(line, t[1].col, "unexpected text after 'end'");
      ended = true;
      ++i;
      continue;
    }
    if (kw == "ci" && bb == nullptr) {
      CiBehavior ci = ps.ci_block(lines, i);
      if (prog.cis.count(ci.name)) ps.fail(line, t[1].col, "CI '" + ci.name + "' defined twice");
      prog.cis[ci.name] = std::move(ci);
      continue;
    }
    ++i;
    if (kw == "live") {
      for (size_t k = 1; k < t.size(); ++k) {
        if (!is_name(t[k].text)) ps.fail(line, t[k].col, "bad name '" + t[k].text + "'");
        prog.live_at_exit.push_back(t[k].text);
      }
      continue;
    }
    if (kw == "data" || kw == "word") {
      if (t.size() < 2) ps.fail(line, t[0].col, "expected an address");
      int64_t addr = ps.number(line, t[1], "an address");
      if (addr < 0) ps.fail(line, t[1].col, "negative address");
      const int width = kw == "data" ? 1 : 4;
      for (size_t k = 2; k < t.size(); ++k) {
        int64_t v = ps.number(line, t[k], "a value");
        if (width == 1 && (v < -128 || v > 255)) ps.fail(line, t[k].col, "byte out of range");
        for (int b = 0; b < width; ++b) {
          prog.data[static_cast<uint32_t>(addr + (k - 2) * width + b)] =
              static_cast<uint8_t>(static_cast<uint64_t>(v) >> (8 * b));
        }
      }
      continue;
    }
    if (kw == "bb") {
      if (t.size() != 4 || t[2].text != "freq") ps.fail(line, t[0].col, "expected 'bb <label> freq <n>'");
      if (!is_name(t[1].text)) ps.fail(line, t[1].col, "bad block label '" + t[1].text + "'");
      if (block_lines.count(t[1].text)) ps.fail(line, t[1].col, "duplicate block '" + t[1].text + "'");
      int64_t f = ps.number(line, t[3], "a frequency");
      if (f < 0) ps.fail(line, t[3].col, "negative frequency");
      block_lines[t[1].text] = line;
      prog.blocks.push_back({t[1].text, static_cast<uint64_t>(f), {}, line});
      bb = &prog.blocks.back();
      block_defs.clear();
      continue;
    }
    if (!bb) ps.fail(line, t[0].col, "operation outside a block");
    if (!bb->ops.empty() && bb->ops.back().is_cti) {
      ps.fail(line, t[0].col, "operation after the block's control transfer");
    }
    OpNode op = ps.op_line(line, t);
    op.id = static_cast<int>(bb->ops.size());
    for (const auto& o : op.outputs) {
      if (!block_defs.insert(o).second) {
        ps.fail(line, t[0].col, "duplicate definition of '" + o + "' in block '" + bb->label + "'");
      }
    }
    bb->ops.push_back(std::move(op));
  }
  if (!in_proc) ps.fail(1, 1, "empty program");
  if (!ended) ps.fail(static_cast<int>(lines.size()), 1, "missing 'end'");

  // Resolve CI ops and branch targets.
  for (auto& b : prog.blocks) {
    for (auto& op : b.ops) {
      if (op.is_cti && !block_lines.count(op.target)) {
        ps.fail(op.line, 1, "undefined block '" + op.target + "'");
      }
      if (!is_ci_opcode_name(op.opcode)) continue;
      auto it = prog.cis.find(op.opcode.substr(3));
      if (it == prog.cis.end()) ps.fail(op.line, 1, "undefined CI '" + op.opcode + "'");
      if (static_cast<int>(op.inputs.size()) != it->second.n_in ||
          static_cast<int>(op.outputs.size()) != it->second.n_out) {
        ps.fail(op.line, 1, "operand counts of '" + op.opcode + "' do not match its definition");
      }
      op.is_mem = it->second.has_memory();
    }
  }
  return prog;
}

CiLibrary parse_ci_library(const std::string& text, const std::string& source) {
  Parser ps(source);
  CiLibrary lib;
  std::vector<std::string> lines = split(text, '\n');
  for (size_t i = 0; i < lines.size();) {
    auto t = tokenize(strip_comment(lines[i]));
    if (t.empty()) {
      ++i;
      continue;
    }
    if (t[0].text != "ci") ps.fail(static_cast<int>(i + 1), t[0].col, "expected a 'ci' definition");
    int line = static_cast<int>(i + 1);
    CiBehavior ci = ps.ci_block(lines, i);
    if (lib.count(ci.name)) ps.fail(line, t[1].col, "CI '" + ci.name + "' defined twice");
    lib[ci.name] = std::move(ci);
  }
  return lib;
}

std::string serialize_ci(const CiBehavior& ci) {
  std::ostringstream o;
  o << "ci " << ci.name << " in " << ci.n_in << " out " << ci.n_out << " cycles " << ci.hw_cycles;
  if (ci.has_memory()) {
    o << " mem";
    for (char c : ci.mem_states) o << " " << c;
  }
  o << "\n";
  for (const auto& op : ci.body) o << "  " << op_text(op) << "\n";
  o << "  ret";
  for (const auto& r : ci.ret) o << " " << r.text();
  o << "\nendci\n";
  return o.str();
}

std::string serialize_iseq(const CdfgProgram& p) {
  std::ostringstream o;
  o << "proc " << p.name << "\n";
  if (!p.live_at_exit.empty()) o << "live " << name_list(p.live_at_exit) << "\n";
  uint32_t next = 0;
  int in_line = 0;
  for (const auto& [addr, b] : p.data) {
    if (in_line == 0 || addr != next || in_line == 16) {
      if (in_line) o << "\n";
      o << "data 0x" << hex(addr, 4);
      in_line = 0;
    }
    o << " 0x" << hex(b, 2);
    ++in_line;
    next = addr + 1;
  }
  if (in_line) o << "\n";
  for (const auto& [name, ci] : p.cis) o << serialize_ci(ci);
  for (const auto& b : p.blocks) {
    o << "bb " << b.label << " freq " << b.freq << "\n";
    for (const auto& op : b.ops) o << "  " << op_text(op) << "\n";
  }
  o << "end\n";
  return o.str();
}

std::optional<Fault> eval_op(const IrOpInfo& op, std::span<const uint32_t> in,
                             std::vector<uint32_t>& out, DataMemory& mem) {
  out.clear();
  switch (op.kind) {
    case K::kAlu:
      out.push_back(alu(op.semantic, in[0], in[1]));
      return std::nullopt;
    case K::kMove:
      out.push_back(in[0]);
      return std::nullopt;
    case K::kLoad:
      if (auto f = mem.check(op.semantic, in[0])) return f;
      out.push_back(mem.load(op.semantic, in[0]));
      return std::nullopt;
    case K::kStore:
      if (auto f = mem.check(op.semantic, in[1])) return f;
      mem.store(op.semantic, in[1], in[0]);
      return std::nullopt;
    default:
      return Fault{FaultKind::kIllegalInstruction, 0, 0, "not a dataflow op"};
  }
}

std::optional<Fault> execute_ci(const CiBehavior& ci, std::span<const uint32_t> in,
                                std::vector<uint32_t>& out, DataMemory& mem) {
  if (static_cast<int>(in.size()) != ci.n_in) {
    return Fault{FaultKind::kCiArity, 0, 0, "CI '" + ci.name + "' input count mismatch"};
  }
  std::map<std::string, uint32_t> env;
  for (int k = 0; k < ci.n_in; ++k) env["i" + std::to_string(k)] = in[k];
  auto value = [&](const ValueRef& r) {
    return r.is_const() ? static_cast<uint32_t>(r.value) : env.at(r.name);
  };
  std::vector<uint32_t> args, res;
  for (const auto& op : ci.body) {
    args.clear();
    for (const auto& r : op.inputs) args.push_back(value(r));
    if (auto f = eval_op(*find_ir_op(op.opcode), args, res, mem)) {
      f->detail = "in CI '" + ci.name + "'";
      return f;
    }
    for (size_t k = 0; k < op.outputs.size(); ++k) env[op.outputs[k]] = res[k];
  }
  out.clear();
  for (const auto& r : ci.ret) out.push_back(value(r));
  return std::nullopt;
}

std::vector<std::vector<int>> block_successors(const CdfgProgram& p) {
  std::vector<std::vector<int>> succ(p.blocks.size());
  for (size_t i = 0; i < p.blocks.size(); ++i) {
    const auto& ops = p.blocks[i].ops;
    const bool has_next = i + 1 < p.blocks.size();
    if (!ops.empty() && ops.back().is_cti) {
      succ[i].push_back(p.block_index(ops.back().target));
      if (ops.back().opcode != "j" && has_next) succ[i].push_back(static_cast<int>(i + 1));
    } else if (has_next) {
      succ[i].push_back(static_cast<int>(i + 1));
    }
    std::sort(succ[i].begin(), succ[i].end());
    succ[i].erase(std::unique(succ[i].begin(), succ[i].end()), succ[i].end());
  }
  return succ;
}

Liveness compute_liveness(const CdfgProgram& p) {
  const size_t n = p.blocks.size();
  std::vector<std::set<std::string>> use(n), def(n);
  for (size_t i = 0; i < n; ++i) {
    for (const auto& op : p.blocks[i].ops) {
      for (const auto& r : op.inputs) {
        if (!r.is_const() && !def[i].count(r.name)) use[i].insert(r.name);
      }
      for (const auto& o : op.outputs) def[i].insert(o);
    }
  }
  auto succ = block_successors(p);
  Liveness lv{std::vector<std::set<std::string>>(n), std::vector<std::set<std::string>>(n)};
  const std::set<std::string> exit_live(p.live_at_exit.begin(), p.live_at_exit.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t ii = n; ii-- > 0;) {
      std::set<std::string> out;
      bool falls_out = succ[ii].empty() ||
                       (ii + 1 == n && !(p.blocks[ii].ops.size() && p.blocks[ii].ops.back().opcode == "j"));
      if (falls_out) out = exit_live;
      for (int s : succ[ii]) out.insert(lv.live_in[s].begin(), lv.live_in[s].end());
      std::set<std::string> in = use[ii];
      for (const auto& v : out) {
        if (!def[ii].count(v)) in.insert(v);
      }
      if (out != lv.live_out[ii] || in != lv.live_in[ii]) {
        lv.live_out[ii] = std::move(out);
        lv.live_in[ii] = std::move(in);
        changed = true;
      }
    }
  }
  return lv;
}

IseqRun run_iseq(const CdfgProgram& p, uint32_t dmem_size, uint64_t max_ops) {
  IseqRun run;
  run.dmem = DataMemory(dmem_size);
  for (const auto& [addr, b] : p.data) {
    if (addr >= dmem_size) throw InputError("data byte at " + std::to_string(addr) + " beyond data memory");
    run.dmem.set_byte(addr, b);
  }
  run.block_counts.assign(p.blocks.size(), 0);
  auto value = [&](const ValueRef& r) -> uint32_t {
    if (r.is_const()) return static_cast<uint32_t>(r.value);
    auto it = run.values.find(r.name);
    return it == run.values.end() ? 0 : it->second;
  };
  std::vector<uint32_t> args, res;
  size_t b = 0;
  while (b < p.blocks.size()) {
    const BasicBlock& bb = p.blocks[b];
    ++run.block_counts[b];
    size_t next = b + 1;
    for (const auto& op : bb.ops) {
      if (run.ops >= max_ops) {
        run.budget_exhausted = true;
        return run;
      }
      ++run.ops;
      args.clear();
      for (const auto& r : op.inputs) args.push_back(value(r));
      if (op.is_cti) {
        bool taken = op.opcode == "j" || (op.opcode == "bnez" ? args[0] != 0 : args[0] == 0);
        if (taken) next = static_cast<size_t>(p.block_index(op.target));
        continue;
      }
      std::optional<Fault> f;
      if (is_ci_opcode_name(op.opcode)) {
        f = execute_ci(p.cis.at(op.opcode.substr(3)), args, res, run.dmem);
      } else {
        f = eval_op(*find_ir_op(op.opcode), args, res, run.dmem);
      }
      if (f) {
        f->detail += (f->detail.empty() ? "" : " ") + std::string("block '") + bb.label +
                     "' line " + std::to_string(op.line);
        run.fault = f;
        return run;
      }
      for (size_t k = 0; k < op.outputs.size(); ++k) run.values[op.outputs[k]] = res[k];
    }
    b = next;
  }
  return run;
}

}  // namespace byorisc
