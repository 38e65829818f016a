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

#include "byorisc/cigen.h"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "byorisc/cisel.h"
#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {

std::vector<int> CiCandidate::node_ids() const { return members(nodes, kMaxDfgNodes); }

bool eligible_node(const Dfg& g, int v, const CiConstraints& c) {
  const OpNode& op = g.nodes[v];
  if (op.is_cti || is_ci_opcode_name(op.opcode)) return false;
  if (op.is_mem && !c.allow_mem) return false;
  if (c.forbidden_opcodes.count(op.opcode)) return false;
  return !c.excluded.test(v);
}

CiCandidate make_candidate(const Dfg& g, int block_index, const NodeSet& s, const Bxir* bxir) {
  CiCandidate c;
  c.block = g.label;
  c.block_index = block_index;
  c.freq = g.freq;
  c.nodes = s;
  IoSignature sig = io_signature(g, s);
  c.n_in = sig.n_in;
  c.n_out = sig.n_out;
  c.n_const = sig.n_const;
  if (bxir) {
    c.sw = sw_cycles(g, s, *bxir);
    c.hw = hw_cycles(g, s, *bxir);
    c.gain = cycle_gain(c.freq, c.sw, c.hw);
    c.area = ci_area(g, s, *bxir);
  }
  return c;
}

bool better_candidate(const CiCandidate& a, const CiCandidate& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.size() != b.size()) return a.size() < b.size();
  return a.node_ids() < b.node_ids();
}

namespace {

class MimoSearch {
 public:
  MimoSearch(const Dfg& g, int bi, const CiConstraints& c, const Bxir& b, bool prune)
      : g_(g), bi_(bi), c_(c), b_(b), prune_(prune) {
    for (int v = g.size() - 1; v >= 0; --v) {
      if (eligible_node(g, v, c)) order_.push_back(v);
    }
    eligible_.assign(g.size(), false);
    for (int v : order_) eligible_[v] = true;
    rest_sw_.assign(order_.size() + 1, 0);
    for (size_t i = order_.size(); i-- > 0;) {
      rest_sw_[i] = rest_sw_[i + 1] + b.find(g.nodes[order_[i]].opcode)->cyc;
    }
  }

  MimoResult run() {
    rec(0, 0, 0);
    return std::move(res_);
  }

 private:
  void rec(size_t i, int n_out, int sw_s) {
    if (c_.visit_budget && res_.visits >= c_.visit_budget) {
      res_.truncated = true;
      return;
    }
    ++res_.visits;
    if (i == order_.size()) {
      if (s_.any()) leaf();
      return;
    }
    if (prune_ && res_.best) {
      const uint64_t best = res_.best->gain;
      if (g_.freq * static_cast<uint64_t>(sw_s + rest_sw_[i]) < best) return;
      if (s_.any()) {
        const int slack = std::max(0, sw_s + rest_sw_[i] - hw_cycles(g_, s_, b_));
        if (g_.freq * static_cast<uint64_t>(slack) < best) return;
      }
    }
    const int v = order_[i];
    if (c_.max_nodes == 0 || static_cast<int>(s_.count()) < c_.max_nodes) {
      if ((g_.desc[v] & ~s_ & anc_s_).none()) {
        int outs = 0;
        for (size_t k = 0; k < g_.consumers[v].size(); ++k) {
          NodeSet ext = g_.consumers[v][k];
          ext.reset(v);
          if ((ext & ~s_).any() || g_.live_out_port[v][k]) ++outs;
        }
        if (n_out + outs <= c_.n_o) {
          const NodeSet saved_anc = anc_s_;
          s_.set(v);
          anc_s_ |= g_.anc[v];
          if (permanent_inputs(v) <= c_.n_i) {
            rec(i + 1, n_out + outs, sw_s + b_.find(g_.nodes[v].opcode)->cyc);
          }
          s_.reset(v);
          anc_s_ = saved_anc;
        }
      }
    }
    rec(i + 1, n_out, sw_s);
  }

  // Inputs that no later decision can absorb, with every node >= v decided.
  int permanent_inputs(int v) const {
    std::set<std::pair<int, std::string>> keys;
    for (int u = v; u < g_.size(); ++u) {
      if (!s_.test(u)) continue;
      for (const ValueSource& src : g_.sources[u]) {
        if (src.kind == ValueSource::Kind::kConst) continue;
        if (src.kind == ValueSource::Kind::kLiveIn) {
          keys.insert({-1, src.name});
        } else if (!s_.test(src.node) && (src.node >= v || !eligible_[src.node])) {
          keys.insert({src.node, src.name});
        }
      }
    }
    return static_cast<int>(keys.size());
  }

  void leaf() {
    CiCandidate c = make_candidate(g_, bi_, s_, &b_);
    if (c.n_in > c_.n_i || c.n_out > c_.n_o) return;
    if (!res_.best || better_candidate(c, *res_.best)) res_.best = c;
    res_.candidates.push_back(std::move(c));
  }

  const Dfg& g_;
  int bi_;
  const CiConstraints& c_;
  const Bxir& b_;
  bool prune_;
  std::vector<int> order_;
  std::vector<bool> eligible_;
  std::vector<int> rest_sw_;
  NodeSet s_;
  NodeSet anc_s_;
  MimoResult res_;
};

void require_opcodes(const Dfg& g, const Bxir& b) {
  for (const OpNode& op : g.nodes) {
    if (op.is_cti || is_ci_opcode_name(op.opcode)) continue;
    if (!b.find(op.opcode)) {
      throw InputError("opcode '" + op.opcode + "' in block '" + g.label + "' has no BXIR record");
    }
  }
}

}  // namespace

MimoResult enumerate_mimo(const Dfg& g, int block_index, const CiConstraints& c, const Bxir& bxir,
                          bool prune) {
  require_opcodes(g, bxir);
  return MimoSearch(g, block_index, c, bxir, prune).run();
}

std::vector<CiCandidate> enumerate_miso(const Dfg& g, int block_index, const CiConstraints& c,
                                        const Bxir& bxir) {
  CiConstraints one = c;
  one.n_o = 1;
  one.visit_budget = 0;
  return enumerate_mimo(g, block_index, one, bxir, false).candidates;
}

std::vector<CiCandidate> enumerate_maxmiso(const Dfg& g, int block_index, const Bxir& bxir,
                                           const CiConstraints* c) {
  require_opcodes(g, bxir);
  CiConstraints dflt;
  const CiConstraints& cc = c ? *c : dflt;
  const int n = g.size();
  std::vector<int> root_of(n, -1);
  for (int v = n - 1; v >= 0; --v) {
    if (!eligible_node(g, v, cc)) continue;
    bool live = false;
    for (bool b : g.live_out_port[v]) live = live || b;
    const bool single = g.succ[v].size() == 1 && eligible_node(g, g.succ[v][0], cc);
    root_of[v] = (!live && single) ? root_of[g.succ[v][0]] : v;
  }
  std::vector<NodeSet> cones(n);
  for (int v = 0; v < n; ++v) {
    if (root_of[v] >= 0) cones[root_of[v]].set(v);
  }
  std::vector<CiCandidate> out;
  for (int v = 0; v < n; ++v) {
    if (root_of[v] == v) out.push_back(make_candidate(g, block_index, cones[v], &bxir));
  }
  return out;
}

std::vector<CiCandidate> extract_candidates(const std::vector<Dfg>& dfgs, const CiConstraints& c,
                                            const Bxir& bxir, int jobs) {
  for (const Dfg& g : dfgs) require_opcodes(g, bxir);
  std::vector<std::vector<CiCandidate>> per_block(dfgs.size());
  auto work = [&](size_t bi) {
    CiConstraints cc = c;
    while (true) {
      MimoResult r = enumerate_mimo(dfgs[bi], static_cast<int>(bi), cc, bxir, true);
      if (!r.best || r.best->gain == 0) break;
      cc.excluded |= r.best->nodes;
      per_block[bi].push_back(*r.best);
    }
  };
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t bi = next++; bi < dfgs.size(); bi = next++) work(bi);
  };
  const int n_threads = std::clamp(jobs, 1, static_cast<int>(std::max<size_t>(dfgs.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  std::vector<CiCandidate> out;
  for (auto& v : per_block) {
    for (CiCandidate& cand : v) out.push_back(std::move(cand));
  }
  for (size_t k = 0; k < out.size(); ++k) out[k].id = static_cast<int>(k);
  return out;
}

std::string serialize_candidates(const std::vector<CiCandidate>& cands) {
  std::ostringstream o;
  for (const CiCandidate& c : cands) {
    o << "cand " << c.id << " block " << c.block << " nodes ";
    std::vector<int> ids = c.node_ids();
    for (size_t k = 0; k < ids.size(); ++k) o << (k ? "," : "") << ids[k];
    o << " io " << c.n_in << "," << c.n_out << "," << c.n_const << " sw " << c.sw << " hw " << c.hw
      << " gain " << c.gain << " area " << c.area << "\n";
  }
  return o.str();
}

std::vector<CiCandidate> parse_candidates(const std::string& text, const CdfgProgram& p,
                                          const std::vector<Dfg>& dfgs, const Bxir& bxir,
                                          const std::string& source) {
  std::vector<CiCandidate> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto t = split_ws(strip_comment(raw));
    if (t.empty()) continue;
    auto fail = [&](const std::string& msg) { throw ParseError(source, line, 1, msg); };
    if (t.size() < 6 || t[0] != "cand" || t[2] != "block" || t[4] != "nodes") {
      fail("expected: cand <id> block <label> nodes <ids> ...");
    }
    const int bi = p.block_index(t[3]);
    if (bi < 0) fail("unknown block '" + t[3] + "'");
    const Dfg& g = dfgs[bi];
    NodeSet s;
    for (const std::string& id : split(t[5], ',')) {
      auto v = parse_int(id);
      if (!v || *v < 0 || *v >= g.size()) fail("bad node id '" + id + "'");
      s.set(static_cast<size_t>(*v));
    }
    auto cid = parse_int(t[1]);
    if (!cid) fail("bad candidate id");
    CiCandidate c = make_candidate(g, bi, s, &bxir);
    c.id = static_cast<int>(*cid);
    if (!is_convex(g, s)) fail("candidate " + t[1] + " is not convex");
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace byorisc
