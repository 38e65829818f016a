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

#ifndef BYORISC_ISEQ_H_
#define BYORISC_ISEQ_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "byorisc/isa.h"
#include "byorisc/semantics.h"

namespace byorisc {

enum class IrKind { kAlu, kMove, kLoad, kStore, kBranch, kJump, kCi };

struct IrOpInfo {
  std::string_view name;
  IrKind kind;
  int n_in;
  int n_out;
  Mnemonic semantic;  // evaluated with this mnemonic's semantics
  Mnemonic machine;   // instruction the op lowers to
  bool commutative;
};

// Built-in ISeq opcodes; "ci.<name>" ops are resolved against CI definitions.
const IrOpInfo* find_ir_op(std::string_view opcode);
std::span<const IrOpInfo> ir_op_table();
inline bool is_ci_opcode_name(std::string_view op) { return op.substr(0, 3) == "ci."; }

struct ValueRef {
  enum class Kind { kReg, kConst };
  Kind kind = Kind::kReg;
  std::string name;  // kReg
  int64_t value = 0; // kConst, kept in 32-bit two's complement range

  static ValueRef reg(std::string n) { return {Kind::kReg, std::move(n), 0}; }
  static ValueRef constant(int64_t v) { return {Kind::kConst, "", v}; }
  bool is_const() const { return kind == Kind::kConst; }
  std::string text() const;
  bool operator==(const ValueRef&) const = default;
};

struct OpNode {
  int id = 0;  // position in its block
  std::string opcode;
  std::vector<ValueRef> inputs;
  std::vector<std::string> outputs;
  std::string target;  // branch or jump label
  int line = 0;
  bool is_mem = false;
  bool is_cti = false;
};

// A custom instruction as a small op list over inputs i0.. and temporaries.
// mem_states has one entry per cycle: '-' none, 'L' load, 'S' store.
struct CiBehavior {
  std::string name;
  int n_in = 0;
  int n_out = 0;
  int hw_cycles = 1;
  std::string mem_states;
  std::vector<OpNode> body;
  std::vector<ValueRef> ret;

  bool has_memory() const;
};

using CiLibrary = std::map<std::string, CiBehavior>;

struct BasicBlock {
  std::string label;
  uint64_t freq = 0;
  std::vector<OpNode> ops;
  int line = 0;
};

struct CdfgProgram {
  std::string name;
  std::vector<BasicBlock> blocks;
  std::map<uint32_t, uint8_t> data;
  std::vector<std::string> live_at_exit;
  CiLibrary cis;

  int block_index(const std::string& label) const;
};

// Throws ParseError with line and column.
CdfgProgram parse_iseq(const std::string& text, const std::string& source = "<iseq>");
std::string serialize_iseq(const CdfgProgram& p);

// "ci" definitions only, as used by standalone CI library files.
CiLibrary parse_ci_library(const std::string& text, const std::string& source = "<cilib>");
std::string serialize_ci(const CiBehavior& ci);

// Evaluates one non-control op. Memory faults are returned, not thrown.
std::optional<Fault> eval_op(const IrOpInfo& op, std::span<const uint32_t> in,
                             std::vector<uint32_t>& out, DataMemory& mem);

// Runs a CI behavior on its input values.
std::optional<Fault> execute_ci(const CiBehavior& ci, std::span<const uint32_t> in,
                                std::vector<uint32_t>& out, DataMemory& mem);

// Per-block liveness over the control-flow graph; live_at_exit seeds exits.
struct Liveness {
  std::vector<std::set<std::string>> live_in;
  std::vector<std::set<std::string>> live_out;
};
std::vector<std::vector<int>> block_successors(const CdfgProgram& p);
Liveness compute_liveness(const CdfgProgram& p);

// Reference interpreter for ISeq programs. Values start at zero.
struct IseqRun {
  std::map<std::string, uint32_t> values;
  DataMemory dmem;
  std::vector<uint64_t> block_counts;
  uint64_t ops = 0;
  std::optional<Fault> fault;
  bool budget_exhausted = false;
};
IseqRun run_iseq(const CdfgProgram& p, uint32_t dmem_size, uint64_t max_ops);

}  // namespace byorisc

#endif  // BYORISC_ISEQ_H_
