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

#ifndef BYORISC_DFG_H_
#define BYORISC_DFG_H_

#include <bitset>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "byorisc/iseq.h"

namespace byorisc {

constexpr int kMaxDfgNodes = 256;
using NodeSet = std::bitset<kMaxDfgNodes>;

enum class EdgeKind { kData, kMemory, kAnti };

struct DfgEdge {
  int from;
  int to;
  EdgeKind kind;
  bool operator==(const DfgEdge&) const = default;
};

// Where an op input comes from.
struct ValueSource {
  enum class Kind { kLiveIn, kNode, kConst };
  Kind kind;
  int node = -1;  // kNode: producer
  int port = 0;   // kNode: producer output index
  std::string name;
  int64_t value = 0;  // kConst
};

// Dataflow graph of one basic block. Node ids equal op positions, and every
// edge goes from a lower to a higher id, so id order is topological.
//   data:   producer -> consumer
//   memory: consecutive memory ops (total order, no alias analysis)
//   anti:   reader of a live-in name -> the op redefining that name
struct Dfg {
  std::string label;
  uint64_t freq = 0;
  std::vector<OpNode> nodes;
  std::vector<DfgEdge> edges;
  std::vector<std::vector<int>> succ, pred;            // all kinds
  std::vector<std::vector<int>> sched_succ, sched_pred;  // data and memory
  std::vector<NodeSet> desc, anc;                      // strict, all kinds
  std::vector<std::vector<ValueSource>> sources;       // per node, per input
  std::vector<std::vector<NodeSet>> consumers;         // per node, per output
  std::vector<std::vector<bool>> live_out_port;        // per node, per output
  std::set<std::string> live_in;   // names read before any local definition
  std::set<std::string> live_out;  // block live-out names

  int size() const { return static_cast<int>(nodes.size()); }
};

// Throws InputError when the block has more than kMaxDfgNodes ops.
Dfg build_dfg(const BasicBlock& bb, const std::set<std::string>& live_out);
std::vector<Dfg> build_program_dfgs(const CdfgProgram& p);

struct Rational {
  int64_t num = 0;
  int64_t den = 1;
  double value() const { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }
  bool operator==(const Rational&) const = default;
};
Rational make_rational(int64_t num, int64_t den);

struct IlpMetrics {
  int num_ops = 0;
  int max_ilp = 0;
  int csteps = 0;
  Rational avg_ilp;
};

// Unit-latency ASAP levels over data and memory edges (level 1 = no preds).
std::vector<int> asap_levels(const Dfg& g);
IlpMetrics asap_metrics(const Dfg& g);

// Operand signature of a node subset.
struct IoSignature {
  int n_in = 0;
  int n_out = 0;
  int n_const = 0;
  // (producer node or -1 for live-in, name) of each distinct register input,
  // in order of first use.
  std::vector<std::pair<int, std::string>> inputs;
  std::vector<int64_t> constants;
  // (node, port) of each exported value, in node order.
  std::vector<std::pair<int, int>> outputs;
};
IoSignature io_signature(const Dfg& g, const NodeSet& s);
bool is_convex(const Dfg& g, const NodeSet& s);

// Deterministic Graphviz text. With a subset, only its members are drawn and
// the markers are the subset's external inputs and outputs.
std::string export_dot(const Dfg& g, const std::optional<NodeSet>& subset = std::nullopt,
                       const std::string& title = "");

std::vector<int> members(const NodeSet& s, int n);

}  // namespace byorisc

#endif  // BYORISC_DFG_H_
