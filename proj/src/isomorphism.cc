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

#include "byorisc/isomorphism.h"

#include <algorithm>
#include <sstream>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {

ClassMap default_class_map() {
  ClassMap m;
  for (const IrOpInfo& op : ir_op_table()) {
    const std::string name(op.name);
    std::string cls;
    switch (op.kind) {
      case IrKind::kLoad: cls = "load"; break;
      case IrKind::kStore: cls = "store"; break;
      case IrKind::kMove: cls = "move"; break;
      case IrKind::kBranch:
      case IrKind::kJump: cls = "cti"; break;
      case IrKind::kCi: cls = name; break;
      case IrKind::kAlu:
        if (name.starts_with("mul")) {
          cls = "mul";
        } else if (name.starts_with("div")) {
          cls = "div";
        } else if (name.starts_with("sll") || name.starts_with("srl") || name.starts_with("sra")) {
          cls = "shift";
        } else {
          cls = "alu";
        }
        break;
    }
    m[name] = cls;
  }
  return m;
}

ClassMap parse_class_map(const std::string& text, const std::string& source) {
  ClassMap m;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto t = split_ws(strip_comment(raw));
    if (t.empty()) continue;
    if (t.size() < 3 || t[0] != "class") throw ParseError(source, line, 1, "expected: class <name> <opcode>...");
    for (size_t k = 2; k < t.size(); ++k) m[t[k]] = t[1];
  }
  return m;
}

namespace {

struct Pattern {
  std::vector<std::string> label;
  std::map<std::pair<int, int>, std::vector<std::string>> edges;
  std::vector<int> in_deg, out_deg;
  int n_in = 0, n_out = 0, n_const = 0;
  size_t n_edges = 0;
};

Pattern make_pattern(const Dfg& g, const NodeSet& s, LabelMode mode, const ClassMap& classes) {
  Pattern p;
  std::vector<int> ids = members(s, g.size());
  std::map<int, int> local;
  for (size_t k = 0; k < ids.size(); ++k) local[ids[k]] = static_cast<int>(k);
  for (int v : ids) {
    const std::string& op = g.nodes[v].opcode;
    auto it = classes.find(op);
    p.label.push_back(mode == LabelMode::kResourceClass && it != classes.end() ? it->second : op);
  }
  p.in_deg.assign(ids.size(), 0);
  p.out_deg.assign(ids.size(), 0);
  auto add = [&](int a, int b, std::string lbl) {
    p.edges[{a, b}].push_back(std::move(lbl));
    ++p.out_deg[a];
    ++p.in_deg[b];
    ++p.n_edges;
  };
  for (int v : ids) {
    const IrOpInfo* info = find_ir_op(g.nodes[v].opcode);
    // A class datapath selects its function per use, so operand order only
    // matters when matching exact opcodes.
    const bool comm = mode == LabelMode::kResourceClass || (info && info->commutative);
    for (size_t j = 0; j < g.sources[v].size(); ++j) {
      const ValueSource& src = g.sources[v][j];
      if (src.kind != ValueSource::Kind::kNode || !s.test(src.node)) continue;
      add(local[src.node], local[v],
          "d" + std::to_string(src.port) + ":" + (comm ? std::string("*") : std::to_string(j)));
    }
  }
  for (const DfgEdge& e : g.edges) {
    if (e.kind == EdgeKind::kData || !s.test(e.from) || !s.test(e.to)) continue;
    add(local[e.from], local[e.to], e.kind == EdgeKind::kMemory ? "m" : "a");
  }
  for (auto& [k, v] : p.edges) std::sort(v.begin(), v.end());
  IoSignature sig = io_signature(g, s);
  p.n_in = sig.n_in;
  p.n_out = sig.n_out;
  p.n_const = sig.n_const;
  return p;
}

const std::vector<std::string>& edge_labels(const Pattern& p, int a, int b) {
  static const std::vector<std::string> none;
  auto it = p.edges.find({a, b});
  return it == p.edges.end() ? none : it->second;
}

class Matcher {
 public:
  Matcher(const Pattern& a, const Pattern& b) : a_(a), b_(b), map_(a.label.size(), -1), used_(b.label.size(), false) {}

  bool run() { return extend(0); }

 private:
  bool extend(size_t i) {
    if (i == map_.size()) return true;
    for (size_t c = 0; c < used_.size(); ++c) {
      if (used_[c] || !feasible(i, static_cast<int>(c))) continue;
      map_[i] = static_cast<int>(c);
      used_[c] = true;
      if (extend(i + 1)) return true;
      used_[c] = false;
      map_[i] = -1;
    }
    return false;
  }

  bool feasible(size_t i, int c) const {
    if (a_.label[i] != b_.label[c] || a_.in_deg[i] != b_.in_deg[c] || a_.out_deg[i] != b_.out_deg[c]) {
      return false;
    }
    const int ai = static_cast<int>(i);
    if (edge_labels(a_, ai, ai) != edge_labels(b_, c, c)) return false;
    for (size_t j = 0; j < i; ++j) {
      const int aj = static_cast<int>(j);
      if (edge_labels(a_, aj, ai) != edge_labels(b_, map_[j], c)) return false;
      if (edge_labels(a_, ai, aj) != edge_labels(b_, c, map_[j])) return false;
    }
    return true;
  }

  const Pattern& a_;
  const Pattern& b_;
  std::vector<int> map_;
  std::vector<bool> used_;
};

bool match(const Pattern& a, const Pattern& b) {
  if (a.label.size() != b.label.size() || a.n_edges != b.n_edges || a.n_in != b.n_in ||
      a.n_out != b.n_out || a.n_const != b.n_const) {
    return false;
  }
  std::vector<std::string> la = a.label, lb = b.label;
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  if (la != lb) return false;
  return Matcher(a, b).run();
}

}  // namespace

bool isomorphic(const Dfg& ga, const NodeSet& a, const Dfg& gb, const NodeSet& b, LabelMode mode,
                const ClassMap& classes) {
  return match(make_pattern(ga, a, mode, classes), make_pattern(gb, b, mode, classes));
}

std::vector<CiTemplate> dedup_patterns(const std::vector<CiCandidate>& cands, const std::vector<Dfg>& dfgs,
                                       LabelMode mode, const ClassMap& classes) {
  std::vector<CiTemplate> out;
  std::vector<Pattern> reps;
  for (size_t k = 0; k < cands.size(); ++k) {
    Pattern p = make_pattern(dfgs.at(cands[k].block_index), cands[k].nodes, mode, classes);
    bool placed = false;
    for (size_t t = 0; t < out.size() && !placed; ++t) {
      if (match(reps[t], p)) {
        out[t].members.push_back(static_cast<int>(k));
        placed = true;
      }
    }
    if (!placed) {
      out.push_back({static_cast<int>(out.size()), {static_cast<int>(k)}});
      reps.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace byorisc
