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

#include "byorisc/cisel.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <queue>
#include <sstream>

#include "byorisc/error.h"

namespace byorisc {
namespace {

const BxirOp& lookup(const Dfg& g, int v, const Bxir& b) {
  const BxirOp* op = b.find(g.nodes[v].opcode);
  if (!op) {
    throw InputError("opcode '" + g.nodes[v].opcode + "' in block '" + g.label + "' has no BXIR record");
  }
  return *op;
}

int ceil_period(int t) { return (t + 999) / 1000; }

}  // namespace

int sw_cycles(const Dfg& g, const NodeSet& s, const Bxir& bxir) {
  int total = 0;
  for (int v = 0; v < g.size(); ++v) {
    if (s.test(v)) total += lookup(g, v, bxir).cyc;
  }
  return total;
}

HwSchedule hw_schedule(const Dfg& g, const NodeSet& s, const Bxir& bxir) {
  HwSchedule h;
  h.start.assign(g.size(), -1);
  h.finish.assign(g.size(), -1);
  std::map<int, char> mem_at;
  int end = 0;
  for (int v = 0; v < g.size(); ++v) {
    if (!s.test(v)) continue;
    const BxirOp& op = lookup(g, v, bxir);
    int t = 0;
    for (int p : g.sched_pred[v]) {
      if (s.test(p)) t = std::max(t, h.finish[p]);
    }
    const IrOpInfo* ir = find_ir_op(g.nodes[v].opcode);
    const bool mem = ir && (ir->kind == IrKind::kLoad || ir->kind == IrKind::kStore);
    if (mem || op.cyc > 1) {
      int c = ceil_period(t);
      if (mem) {
        while (mem_at.count(c)) ++c;
        mem_at[c] = ir->kind == IrKind::kLoad ? 'L' : 'S';
      }
      h.start[v] = c * 1000;
      h.finish[v] = (c + op.cyc) * 1000;
    } else {
      const int lat = op.lat_milli();
      if (t / 1000 != (t + lat - 1) / 1000) t = ceil_period(t) * 1000;
      h.start[v] = t;
      h.finish[v] = t + lat;
    }
    end = std::max(end, h.finish[v]);
  }
  h.cycles = ceil_period(end);
  h.mem_states.assign(h.cycles, '-');
  for (const auto& [c, k] : mem_at) h.mem_states[c] = k;
  return h;
}

int hw_cycles(const Dfg& g, const NodeSet& s, const Bxir& bxir) {
  return hw_schedule(g, s, bxir).cycles;
}

uint64_t cycle_gain(uint64_t freq, int sw, int hw) {
  return sw > hw ? freq * static_cast<uint64_t>(sw - hw) : 0;
}

constexpr double kMinCiArea = 0.01;

double ci_area(const Dfg& g, const NodeSet& s, const Bxir& bxir) {
  double a = 0.0;
  for (int v = 0; v < g.size(); ++v) {
    if (s.test(v)) a += lookup(g, v, bxir).area;
  }
  // Every CI costs at least one area quantum (decode and SID entry), so a
  // zero budget admits nothing.
  return s.any() ? std::max(a, kMinCiArea) : a;
}

int area_units(double area) { return static_cast<int>(std::llround(area * 100.0)); }

namespace {

bool acyclic_contraction(const Dfg& g, const std::vector<const CiCandidate*>& group) {
  const int n = g.size();
  std::vector<int> rep(n);
  for (int v = 0; v < n; ++v) rep[v] = v;
  for (size_t k = 0; k < group.size(); ++k) {
    for (int v : group[k]->node_ids()) rep[v] = n + static_cast<int>(k);
  }
  const int m = n + static_cast<int>(group.size());
  std::vector<std::vector<int>> adj(m);
  std::vector<int> indeg(m, 0);
  for (const DfgEdge& e : g.edges) {
    const int a = rep[e.from], b = rep[e.to];
    if (a == b) continue;
    adj[a].push_back(b);
    ++indeg[b];
  }
  std::vector<int> ready;
  for (int v = 0; v < m; ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int w : adj[v]) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  return seen == m;
}

bool order_by_gain(const CiCandidate& a, const CiCandidate& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (area_units(a.area) != area_units(b.area)) return area_units(a.area) < area_units(b.area);
  return a.id < b.id;
}

int budget_units(double budget) {
  if (budget <= 0) return 0;
  return static_cast<int>(std::min(std::floor(budget * 100.0 + 1e-6), 1e9));
}

SelectionReport finish_selection(std::vector<CiCandidate> chosen, const std::string& method, double budget) {
  std::sort(chosen.begin(), chosen.end(), order_by_gain);
  SelectionReport r;
  r.method = method;
  r.budget = budget;
  for (CiCandidate& c : chosen) {
    r.total_area += c.area;
    r.total_gain += c.gain;
    r.chosen.push_back({std::move(c), "", -1, 1.0});
  }
  r.template_area = r.total_area;
  return r;
}

}  // namespace

bool compatible(const std::vector<const CiCandidate*>& cands, const std::vector<Dfg>& dfgs) {
  std::map<int, std::vector<const CiCandidate*>> by_block;
  for (const CiCandidate* c : cands) by_block[c->block_index].push_back(c);
  for (const auto& [bi, group] : by_block) {
    NodeSet used;
    for (const CiCandidate* c : group) {
      if ((used & c->nodes).any()) return false;
      used |= c->nodes;
    }
    if (group.size() > 1 && !acyclic_contraction(dfgs.at(bi), group)) return false;
  }
  return true;
}

SelectionReport select_greedy(const std::vector<CiCandidate>& cands, const std::vector<Dfg>& dfgs,
                              double budget) {
  std::vector<CiCandidate> sorted = cands;
  std::sort(sorted.begin(), sorted.end(), order_by_gain);
  const int cap = budget_units(budget);
  int used = 0;
  std::vector<const CiCandidate*> taken;
  for (const CiCandidate& c : sorted) {
    if (c.gain == 0) continue;
    const int a = area_units(c.area);
    if (used + a > cap) continue;
    taken.push_back(&c);
    if (!compatible(taken, dfgs)) {
      taken.pop_back();
      continue;
    }
    used += a;
  }
  std::vector<CiCandidate> chosen;
  for (const CiCandidate* c : taken) chosen.push_back(*c);
  return finish_selection(std::move(chosen), "greedy", budget);
}

SelectionReport select_knapsack(const std::vector<CiCandidate>& cands, const std::vector<Dfg>& dfgs,
                                double budget) {
  const int cap_budget = budget_units(budget);
  std::map<int, std::vector<const CiCandidate*>> by_block;
  int total_units = 0;
  for (const CiCandidate& c : cands) {
    if (c.gain == 0 || area_units(c.area) > cap_budget) continue;
    by_block[c.block_index].push_back(&c);
    total_units += area_units(c.area);
  }
  const int cap = std::min(cap_budget, total_units);

  struct Combo {
    int area = 0;
    uint64_t gain = 0;
    std::vector<const CiCandidate*> items;
  };
  std::vector<std::vector<Combo>> blocks;
  for (const auto& [bi, items] : by_block) {
    std::vector<Combo> combos;
    Combo cur;
    auto dfs = [&](auto&& self, size_t k) -> void {
      if (k == items.size()) {
        if (!cur.items.empty()) combos.push_back(cur);
        return;
      }
      const CiCandidate* c = items[k];
      const int a = area_units(c->area);
      if (cur.area + a <= cap) {
        cur.items.push_back(c);
        if (compatible(cur.items, dfgs)) {
          cur.area += a;
          cur.gain += c->gain;
          self(self, k + 1);
          cur.area -= a;
          cur.gain -= c->gain;
        }
        cur.items.pop_back();
      }
      self(self, k + 1);
    };
    dfs(dfs, 0);
    blocks.push_back(std::move(combos));
  }

  std::vector<uint64_t> dp(cap + 1, 0);
  std::vector<std::vector<int>> pick(blocks.size(), std::vector<int>(cap + 1, -1));
  for (size_t b = 0; b < blocks.size(); ++b) {
    std::vector<uint64_t> next = dp;
    for (size_t k = 0; k < blocks[b].size(); ++k) {
      const Combo& cb = blocks[b][k];
      for (int a = cap; a >= cb.area; --a) {
        const uint64_t v = dp[a - cb.area] + cb.gain;
        if (v > next[a]) {
          next[a] = v;
          pick[b][a] = static_cast<int>(k);
        }
      }
    }
    dp = std::move(next);
  }
  std::vector<CiCandidate> chosen;
  int a = cap;
  for (size_t b = blocks.size(); b-- > 0;) {
    const int k = pick[b][a];
    if (k < 0) continue;
    for (const CiCandidate* c : blocks[b][k].items) chosen.push_back(*c);
    a -= blocks[b][k].area;
  }
  return finish_selection(std::move(chosen), "knapsack", budget);
}

uint64_t base_cycles(const CdfgProgram& p, const Bxir& bxir) {
  uint64_t total = 0;
  for (const BasicBlock& bb : p.blocks) {
    uint64_t per = 0;
    for (const OpNode& op : bb.ops) per += static_cast<uint64_t>(op_cycles(op, bxir, p.cis));
    total += bb.freq * per;
  }
  return total;
}

double speedup_of(uint64_t base, uint64_t gain) {
  if (gain >= base) throw InputError("total cycle gain does not leave any base cycles");
  return static_cast<double>(base) / static_cast<double>(base - gain);
}

void estimate_speedup(SelectionReport& r, uint64_t base) {
  r.base_cycles = base;
  uint64_t acc = 0;
  for (SelectedCi& s : r.chosen) {
    acc += s.cand.gain;
    s.incr_speedup = speedup_of(base, acc);
  }
  r.total_gain = acc;
  r.new_cycles = base - acc;
  r.speedup = speedup_of(base, acc);
}

void estimate_speedup(const CdfgProgram& p, SelectionReport& r, const Bxir& bxir) {
  estimate_speedup(r, base_cycles(p, bxir));
}

double percent_diff(double estimated, double simulated) {
  return (estimated - simulated) / simulated * 100.0;
}

namespace {

std::string ci_label(const SelectedCi& s, size_t k) {
  return s.name.empty() ? "ci" + std::to_string(k + 1) : s.name;
}

std::string fixed(double v, int digits) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

std::string node_list(const CiCandidate& c) {
  std::string s;
  for (int v : c.node_ids()) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

}  // namespace

std::string format_report_csv(const SelectionReport& r) {
  std::ostringstream o;
  o << "CI,block,nodes,N_i,N_o,N_c,cycle_gain,incr_speedup,sw_cyc,hw_cyc,area_mau\n";
  for (size_t k = 0; k < r.chosen.size(); ++k) {
    const SelectedCi& s = r.chosen[k];
    const CiCandidate& c = s.cand;
    o << ci_label(s, k) << "," << c.block << "," << node_list(c) << "," << c.n_in << "," << c.n_out
      << "," << c.n_const << "," << c.gain << "," << fixed(s.incr_speedup, 2) << "," << c.sw << ","
      << c.hw << "," << fixed(c.area, 2) << "\n";
  }
  o << "\nmetric,value\n";
  o << "method," << r.method << "\n";
  o << "budget_mau," << fixed(r.budget, 2) << "\n";
  o << "total_area_mau," << fixed(r.total_area, 2) << "\n";
  o << "template_area_mau," << fixed(r.template_area, 2) << "\n";
  o << "total_gain," << r.total_gain << "\n";
  o << "base_cycles," << r.base_cycles << "\n";
  o << "new_cycles," << r.new_cycles << "\n";
  o << "speedup," << fixed(r.speedup, 4) << "\n";
  return o.str();
}

std::string format_report_markdown(const SelectionReport& r) {
  std::ostringstream o;
  o << "| CI | N_i,N_o,N_c | Cyc. gain | Incr. speedup | SW cyc. | HW cyc. | Area (MAU) |\n";
  o << "|----|-------------|-----------|---------------|---------|---------|------------|\n";
  for (size_t k = 0; k < r.chosen.size(); ++k) {
    const SelectedCi& s = r.chosen[k];
    const CiCandidate& c = s.cand;
    o << "| " << ci_label(s, k) << " | " << c.n_in << "," << c.n_out << "," << c.n_const << " | "
      << c.gain << " | " << fixed(s.incr_speedup, 2) << " | " << c.sw << " | " << c.hw << " | "
      << fixed(c.area, 2) << " |\n";
  }
  o << "\nmethod " << r.method << ", budget " << fixed(r.budget, 2) << " MAU, area "
    << fixed(r.total_area, 2) << " MAU (" << fixed(r.template_area, 2) << " with shared templates)\n";
  o << "base cycles " << r.base_cycles << ", new cycles " << r.new_cycles << ", speedup "
    << fixed(r.speedup, 2) << "\n";
  return o.str();
}

namespace {

CiBehavior make_behavior(const Dfg& g, const CiCandidate& c, const Bxir& bxir) {
  IoSignature sig = io_signature(g, c.nodes);
  HwSchedule h = hw_schedule(g, c.nodes, bxir);
  CiBehavior ci;
  ci.n_in = sig.n_in;
  ci.n_out = sig.n_out;
  ci.hw_cycles = std::max(1, h.cycles);
  ci.mem_states = h.mem_states;
  ci.mem_states.resize(ci.hw_cycles, '-');
  std::map<std::pair<int, int>, std::string> temp;  // (node, port) -> tK
  int next_temp = 0;
  for (int v : c.node_ids()) {
    OpNode op;
    op.id = static_cast<int>(ci.body.size());
    op.opcode = g.nodes[v].opcode;
    op.line = g.nodes[v].line;
    op.is_mem = g.nodes[v].is_mem;
    for (const ValueSource& src : g.sources[v]) {
      if (src.kind == ValueSource::Kind::kConst) {
        op.inputs.push_back(ValueRef::constant(src.value));
      } else if (src.kind == ValueSource::Kind::kNode && c.nodes.test(src.node)) {
        op.inputs.push_back(ValueRef::reg(temp.at({src.node, src.port})));
      } else {
        std::pair<int, std::string> key{src.kind == ValueSource::Kind::kNode ? src.node : -1, src.name};
        auto it = std::find(sig.inputs.begin(), sig.inputs.end(), key);
        op.inputs.push_back(ValueRef::reg("i" + std::to_string(it - sig.inputs.begin())));
      }
    }
    for (size_t k = 0; k < g.nodes[v].outputs.size(); ++k) {
      std::string t = "t" + std::to_string(next_temp++);
      temp[{v, static_cast<int>(k)}] = t;
      op.outputs.push_back(t);
    }
    ci.body.push_back(std::move(op));
  }
  for (const auto& [v, port] : sig.outputs) ci.ret.push_back(ValueRef::reg(temp.at({v, port})));
  return ci;
}

OpNode make_ci_op(const Dfg& g, const CiCandidate& c, const CiBehavior& ci) {
  IoSignature sig = io_signature(g, c.nodes);
  OpNode op;
  op.opcode = "ci." + ci.name;
  for (const auto& [producer, name] : sig.inputs) op.inputs.push_back(ValueRef::reg(name));
  for (const auto& [v, port] : sig.outputs) op.outputs.push_back(g.nodes[v].outputs[port]);
  op.line = g.nodes[c.node_ids().front()].line;
  op.is_mem = ci.has_memory();
  return op;
}

}  // namespace

MappedProgram map_cis(const CdfgProgram& p, const std::vector<Dfg>& dfgs, SelectionReport& r,
                      const Bxir& bxir, const MachineConfig* cfg) {
  MappedProgram out;
  out.program = p;
  std::map<std::string, std::string> by_body;  // behavior text -> CI name
  std::vector<CiBehavior> behaviors;
  int next_name = 1;
  for (SelectedCi& s : r.chosen) {
    const Dfg& g = dfgs.at(s.cand.block_index);
    CiBehavior ci = make_behavior(g, s.cand, bxir);
    if (cfg && (ci.n_in > cfg->n_ci_inputs || ci.n_out > cfg->n_ci_outputs)) {
      throw InputError("candidate in block '" + s.cand.block + "' needs " + std::to_string(ci.n_in) +
                       " inputs and " + std::to_string(ci.n_out) + " outputs, the machine allows " +
                       std::to_string(cfg->n_ci_inputs) + " and " + std::to_string(cfg->n_ci_outputs));
    }
    const std::string key = serialize_ci(ci);
    auto it = by_body.find(key);
    if (it != by_body.end()) {
      s.name = it->second;
    } else {
      do {
        s.name = p.name + std::to_string(next_name++);
      } while (p.cis.count(s.name));
      by_body[key] = s.name;
      ci.name = s.name;
      out.program.cis[s.name] = ci;
    }
    out.names.push_back(s.name);
  }

  for (size_t bi = 0; bi < p.blocks.size(); ++bi) {
    std::vector<const SelectedCi*> mine;
    for (const SelectedCi& s : r.chosen) {
      if (s.cand.block_index == static_cast<int>(bi)) mine.push_back(&s);
    }
    if (mine.empty()) continue;
    const Dfg& g = dfgs[bi];
    const int n = g.size();
    std::vector<int> rep(n);
    for (int v = 0; v < n; ++v) rep[v] = v;
    std::vector<int> key(n + mine.size());
    for (int v = 0; v < n; ++v) key[v] = v;
    for (size_t k = 0; k < mine.size(); ++k) {
      std::vector<int> ids = mine[k]->cand.node_ids();
      for (int v : ids) rep[v] = n + static_cast<int>(k);
      key[n + k] = ids.front();
    }
    const int m = n + static_cast<int>(mine.size());
    std::vector<bool> alive(m, false);
    for (int v = 0; v < n; ++v) alive[rep[v]] = true;
    std::vector<std::set<int>> adj(m);
    std::vector<int> indeg(m, 0);
    for (const DfgEdge& e : g.edges) {
      const int a = rep[e.from], b = rep[e.to];
      if (a != b && adj[a].insert(b).second) ++indeg[b];
    }
    using Item = std::pair<int, int>;  // (key, node)
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> ready;
    for (int v = 0; v < m; ++v) {
      if (alive[v] && indeg[v] == 0) ready.push({key[v], v});
    }
    BasicBlock nb = p.blocks[bi];
    nb.ops.clear();
    while (!ready.empty()) {
      const int v = ready.top().second;
      ready.pop();
      if (v < n) {
        nb.ops.push_back(g.nodes[v]);
      } else {
        const SelectedCi& s = *mine[v - n];
        nb.ops.push_back(make_ci_op(g, s.cand, out.program.cis.at(s.name)));
      }
      for (int w : adj[v]) {
        if (--indeg[w] == 0) ready.push({key[w], w});
      }
    }
    if (nb.ops.size() != static_cast<size_t>(std::count(alive.begin(), alive.end(), true))) {
      throw InputError("selected candidates in block '" + g.label + "' form a dependence cycle");
    }
    for (size_t k = 0; k < nb.ops.size(); ++k) nb.ops[k].id = static_cast<int>(k);
    out.program.blocks[bi] = std::move(nb);
  }
  return out;
}

}  // namespace byorisc
