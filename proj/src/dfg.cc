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

#include "byorisc/dfg.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "byorisc/error.h"

namespace byorisc {

Dfg build_dfg(const BasicBlock& bb, const std::set<std::string>& live_out) {
  Dfg g;
  g.label = bb.label;
  g.freq = bb.freq;
  g.nodes = bb.ops;
  g.live_out = live_out;
  const int n = g.size();
  if (n > kMaxDfgNodes) {
    throw InputError("block '" + bb.label + "' has " + std::to_string(n) + " ops, limit is " +
                     std::to_string(kMaxDfgNodes));
  }
  g.succ.assign(n, {});
  g.pred.assign(n, {});
  g.sched_succ.assign(n, {});
  g.sched_pred.assign(n, {});
  g.sources.assign(n, {});
  g.consumers.assign(n, {});
  g.live_out_port.assign(n, {});

  std::map<std::string, std::pair<int, int>> def;
  std::map<std::string, std::vector<int>> live_in_readers;
  std::set<std::tuple<int, int, EdgeKind>> seen;
  auto add_edge = [&](int from, int to, EdgeKind k) {
    if (from == to || !seen.insert({from, to, k}).second) return;
    g.edges.push_back({from, to, k});
  };
  int last_mem = -1;
  for (int v = 0; v < n; ++v) {
    const OpNode& op = g.nodes[v];
    g.consumers[v].assign(op.outputs.size(), NodeSet());
    for (const ValueRef& r : op.inputs) {
      ValueSource src;
      if (r.is_const()) {
        src = {ValueSource::Kind::kConst, -1, 0, "", r.value};
      } else if (auto it = def.find(r.name); it != def.end()) {
        src = {ValueSource::Kind::kNode, it->second.first, it->second.second, r.name, 0};
        add_edge(it->second.first, v, EdgeKind::kData);
        g.consumers[it->second.first][it->second.second].set(v);
      } else {
        src = {ValueSource::Kind::kLiveIn, -1, 0, r.name, 0};
        g.live_in.insert(r.name);
        live_in_readers[r.name].push_back(v);
      }
      g.sources[v].push_back(src);
    }
    if (op.is_mem) {
      if (last_mem >= 0) add_edge(last_mem, v, EdgeKind::kMemory);
      last_mem = v;
    }
    for (size_t k = 0; k < op.outputs.size(); ++k) {
      const std::string& o = op.outputs[k];
      for (int reader : live_in_readers[o]) add_edge(reader, v, EdgeKind::kAnti);
      def[o] = {v, static_cast<int>(k)};
      g.live_out_port[v].push_back(live_out.count(o) > 0);
    }
  }
  for (const DfgEdge& e : g.edges) {
    auto push_unique = [](std::vector<int>& vec, int x) {
      if (std::find(vec.begin(), vec.end(), x) == vec.end()) vec.push_back(x);
    };
    push_unique(g.succ[e.from], e.to);
    push_unique(g.pred[e.to], e.from);
    if (e.kind != EdgeKind::kAnti) {
      push_unique(g.sched_succ[e.from], e.to);
      push_unique(g.sched_pred[e.to], e.from);
    }
  }
  for (int v = 0; v < n; ++v) {
    std::sort(g.succ[v].begin(), g.succ[v].end());
    std::sort(g.pred[v].begin(), g.pred[v].end());
    std::sort(g.sched_succ[v].begin(), g.sched_succ[v].end());
    std::sort(g.sched_pred[v].begin(), g.sched_pred[v].end());
  }
  g.desc.assign(n, NodeSet());
  g.anc.assign(n, NodeSet());
  for (int v = n - 1; v >= 0; --v) {
    for (int s : g.succ[v]) {
      g.desc[v].set(s);
      g.desc[v] |= g.desc[s];
    }
  }
  for (int v = 0; v < n; ++v) {
    for (int p : g.pred[v]) {
      g.anc[v].set(p);
      g.anc[v] |= g.anc[p];
    }
  }
  return g;
}

std::vector<Dfg> build_program_dfgs(const CdfgProgram& p) {
  Liveness lv = compute_liveness(p);
  std::vector<Dfg> out;
  for (size_t i = 0; i < p.blocks.size(); ++i) out.push_back(build_dfg(p.blocks[i], lv.live_out[i]));
  return out;
}

Rational make_rational(int64_t num, int64_t den) {
  if (den == 0) return {0, 1};
  int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  if (den < 0) g = -g;
  return {num / g, den / g};
}

std::vector<int> asap_levels(const Dfg& g) {
  std::vector<int> level(g.size(), 1);
  for (int v = 0; v < g.size(); ++v) {
    for (int p : g.sched_pred[v]) level[v] = std::max(level[v], level[p] + 1);
  }
  return level;
}

IlpMetrics asap_metrics(const Dfg& g) {
  IlpMetrics m;
  m.num_ops = g.size();
  if (m.num_ops == 0) {
    m.avg_ilp = {0, 1};
    return m;
  }
  std::vector<int> level = asap_levels(g);
  m.csteps = *std::max_element(level.begin(), level.end());
  std::vector<int> per_step(m.csteps + 1, 0);
  for (int l : level) ++per_step[l];
  m.max_ilp = *std::max_element(per_step.begin(), per_step.end());
  m.avg_ilp = make_rational(m.num_ops, m.csteps);
  return m;
}

std::vector<int> members(const NodeSet& s, int n) {
  std::vector<int> out;
  for (int v = 0; v < n; ++v) {
    if (s.test(v)) out.push_back(v);
  }
  return out;
}

bool is_convex(const Dfg& g, const NodeSet& s) {
  NodeSet down, up;
  for (int v = 0; v < g.size(); ++v) {
    if (!s.test(v)) continue;
    down |= g.desc[v];
    up |= g.anc[v];
  }
  return (down & up & ~s).none();
}

IoSignature io_signature(const Dfg& g, const NodeSet& s) {
  IoSignature sig;
  std::set<std::pair<int, std::string>> seen_in;
  std::set<int64_t> seen_const;
  for (int v = 0; v < g.size(); ++v) {
    if (!s.test(v)) continue;
    for (const ValueSource& src : g.sources[v]) {
      if (src.kind == ValueSource::Kind::kConst) {
        if (seen_const.insert(src.value).second) sig.constants.push_back(src.value);
        continue;
      }
      if (src.kind == ValueSource::Kind::kNode && s.test(src.node)) continue;
      std::pair<int, std::string> key{src.kind == ValueSource::Kind::kNode ? src.node : -1, src.name};
      if (seen_in.insert(key).second) sig.inputs.push_back(key);
    }
    for (size_t k = 0; k < g.consumers[v].size(); ++k) {
      if ((g.consumers[v][k] & ~s).any() || g.live_out_port[v][k]) {
        sig.outputs.push_back({v, static_cast<int>(k)});
      }
    }
  }
  sig.n_in = static_cast<int>(sig.inputs.size());
  sig.n_out = static_cast<int>(sig.outputs.size());
  sig.n_const = static_cast<int>(sig.constants.size());
  return sig;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

const char* edge_style(EdgeKind k) {
  switch (k) {
    case EdgeKind::kData: return "";
    case EdgeKind::kMemory: return " [style=dashed]";
    case EdgeKind::kAnti: return " [style=dotted]";
  }
  return "";
}

}  // namespace

std::string export_dot(const Dfg& g, const std::optional<NodeSet>& subset, const std::string& title) {
  NodeSet s;
  if (subset) {
    s = *subset;
  } else {
    for (int v = 0; v < g.size(); ++v) s.set(v);
  }
  std::ostringstream o;
  o << "digraph " << quote(title.empty() ? g.label : title) << " {\n";
  o << "  node [shape=box];\n";
  for (int v = 0; v < g.size(); ++v) {
    if (!s.test(v)) continue;
    o << "  n" << v << " [label=" << quote(std::to_string(v) + ": " + g.nodes[v].opcode) << "];\n";
  }
  IoSignature sig = io_signature(g, s);
  for (size_t k = 0; k < sig.inputs.size(); ++k) {
    const auto& [producer, name] = sig.inputs[k];
    std::string label = producer < 0 ? name : name + " (n" + std::to_string(producer) + ")";
    o << "  in" << k << " [label=" << quote(label) << ", shape=invtriangle];\n";
  }
  for (size_t k = 0; k < sig.constants.size(); ++k) {
    o << "  c" << k << " [label=" << quote("$" + std::to_string(sig.constants[k]))
      << ", shape=ellipse];\n";
  }
  for (size_t k = 0; k < sig.outputs.size(); ++k) {
    const auto& [v, port] = sig.outputs[k];
    o << "  out" << k << " [label=" << quote(g.nodes[v].outputs[port]) << ", shape=triangle];\n";
  }
  for (const DfgEdge& e : g.edges) {
    if (s.test(e.from) && s.test(e.to)) o << "  n" << e.from << " -> n" << e.to << edge_style(e.kind) << ";\n";
  }
  for (int v = 0; v < g.size(); ++v) {
    if (!s.test(v)) continue;
    std::set<std::string> drawn;
    for (const ValueSource& src : g.sources[v]) {
      std::string from;
      if (src.kind == ValueSource::Kind::kConst) {
        auto it = std::find(sig.constants.begin(), sig.constants.end(), src.value);
        from = "c" + std::to_string(it - sig.constants.begin());
      } else if (src.kind == ValueSource::Kind::kNode && s.test(src.node)) {
        continue;
      } else {
        std::pair<int, std::string> key{src.kind == ValueSource::Kind::kNode ? src.node : -1, src.name};
        auto it = std::find(sig.inputs.begin(), sig.inputs.end(), key);
        from = "in" + std::to_string(it - sig.inputs.begin());
      }
      if (drawn.insert(from).second) o << "  " << from << " -> n" << v << ";\n";
    }
  }
  for (size_t k = 0; k < sig.outputs.size(); ++k) {
    o << "  n" << sig.outputs[k].first << " -> out" << k << ";\n";
  }
  o << "}\n";
  return o.str();
}

}  // namespace byorisc
