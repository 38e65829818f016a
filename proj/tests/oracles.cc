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

#include "oracles.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "byorisc/isa.h"

namespace byorisc::oracle {

std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string random_dag_iseq(std::mt19937& rng, int n) {
  static const char* kBinary[] = {"add", "sub", "and", "or", "xor", "mul", "slt", "sllv"};
  static const char* kShift[] = {"sll", "srl"};
  auto pick = [&](int k) { return static_cast<int>(rng() % static_cast<unsigned>(k)); };
  auto operand = [&](int i) -> std::string {
    const int r = pick(100);
    if (r < 15) return "$" + std::to_string(pick(3) + 1);
    if (i > 0 && r < 75) return "v" + std::to_string(pick(i));
    return "x" + std::to_string(pick(4));
  };
  std::ostringstream o;
  std::vector<std::string> live;
  for (int i = 0; i < n; ++i) {
    if (pick(4) == 0) live.push_back("v" + std::to_string(i));
  }
  o << "proc r\n";
  if (!live.empty()) {
    o << "live";
    for (const auto& v : live) o << " " << v;
    o << "\n";
  }
  o << "bb b freq " << (1 + pick(50)) << "\n";
  for (int i = 0; i < n; ++i) {
    o << "  v" << i << " = ";
    if (pick(5) == 0) {
      std::string a = operand(i);
      if (a[0] == '$') a = "x0";
      o << kShift[pick(2)] << " " << a << " $" << (1 + pick(4)) << "\n";
    } else {
      o << kBinary[pick(8)] << " " << operand(i) << " " << operand(i) << "\n";
    }
  }
  if (n > 0 && pick(3) == 0) o << "  bnez v" << pick(n) << " @b\n";
  o << "end\n";
  return o.str();
}

namespace {

// Def-use facts of one block computed from its op list.
struct BlockFacts {
  int n = 0;
  std::vector<std::vector<bool>> edge;    // direct ordering edges
  std::vector<std::vector<bool>> reach;   // transitive, strict
  std::vector<std::vector<std::pair<int, std::string>>> reg_in;
  std::vector<std::set<int64_t>> consts;
  std::vector<std::vector<std::vector<int>>> users;  // per op, per output
  std::vector<std::vector<bool>> live_out;           // per op, per output
};

BlockFacts block_facts(const CdfgProgram& p, int block) {
  const BasicBlock& bb = p.blocks[block];
  BlockFacts f;
  f.n = static_cast<int>(bb.ops.size());
  f.edge.assign(f.n, std::vector<bool>(f.n, false));
  f.reg_in.resize(f.n);
  f.consts.resize(f.n);
  f.users.resize(f.n);
  f.live_out.resize(f.n);
  std::map<std::string, int> last_def;
  std::map<std::string, std::vector<int>> readers_since_def;
  int last_mem = -1;
  for (int j = 0; j < f.n; ++j) {
    const OpNode& op = bb.ops[j];
    f.users[j].resize(op.outputs.size());
    f.live_out[j].assign(op.outputs.size(), false);
    for (const ValueRef& in : op.inputs) {
      if (in.is_const()) {
        f.consts[j].insert(in.value);
        continue;
      }
      auto it = last_def.find(in.name);
      if (it == last_def.end()) {
        f.reg_in[j].push_back({-1, in.name});
      } else {
        f.reg_in[j].push_back({it->second, in.name});
        f.edge[it->second][j] = true;
        const OpNode& prod = bb.ops[it->second];
        for (size_t k = 0; k < prod.outputs.size(); ++k) {
          if (prod.outputs[k] == in.name) f.users[it->second][k].push_back(j);
        }
      }
      readers_since_def[in.name].push_back(j);
    }
    if (op.is_mem) {
      if (last_mem >= 0) f.edge[last_mem][j] = true;
      last_mem = j;
    }
    for (const std::string& out : op.outputs) {
      for (int r : readers_since_def[out]) {
        if (r != j) f.edge[r][j] = true;
      }
      auto prev = last_def.find(out);
      if (prev != last_def.end() && prev->second != j) f.edge[prev->second][j] = true;
      readers_since_def[out].clear();
      last_def[out] = j;
    }
  }
  // Live-out: the final definition of a name read after the block. Only
  // procedures with a single block, whose exit set is the live line, or a
  // self-loop that adds only its live-in names, are generated.
  std::set<std::string> live(p.live_at_exit.begin(), p.live_at_exit.end());
  for (const auto& [name, j] : last_def) {
    if (!live.count(name)) continue;
    const OpNode& op = bb.ops[j];
    for (size_t k = 0; k < op.outputs.size(); ++k) {
      if (op.outputs[k] == name) f.live_out[j][k] = true;
    }
  }
  f.reach = f.edge;
  for (int k = 0; k < f.n; ++k) {
    for (int i = 0; i < f.n; ++i) {
      if (!f.reach[i][k]) continue;
      for (int j = 0; j < f.n; ++j) {
        if (f.reach[k][j]) f.reach[i][j] = true;
      }
    }
  }
  return f;
}

bool in_mask(uint32_t m, int v) { return (m >> v) & 1u; }

}  // namespace

std::vector<SubsetInfo> brute_force_subsets(const CdfgProgram& p, int block, const CiConstraints& c) {
  const BasicBlock& bb = p.blocks[block];
  BlockFacts f = block_facts(p, block);
  std::vector<bool> ok(f.n);
  for (int v = 0; v < f.n; ++v) {
    const OpNode& op = bb.ops[v];
    ok[v] = !op.is_cti && !(op.is_mem && !c.allow_mem) && !c.forbidden_opcodes.count(op.opcode) &&
            !c.excluded.test(v) && op.opcode.rfind("ci.", 0) != 0;
  }
  std::vector<SubsetInfo> out;
  for (uint32_t m = 1; m < (1u << f.n); ++m) {
    bool valid = true;
    for (int v = 0; v < f.n && valid; ++v) {
      if (in_mask(m, v) && !ok[v]) valid = false;
    }
    if (!valid) continue;
    if (c.max_nodes && __builtin_popcount(m) > c.max_nodes) continue;
    for (int x = 0; x < f.n && valid; ++x) {
      if (in_mask(m, x)) continue;
      bool from = false, to = false;
      for (int v = 0; v < f.n; ++v) {
        if (!in_mask(m, v)) continue;
        from = from || f.reach[v][x];
        to = to || f.reach[x][v];
      }
      if (from && to) valid = false;
    }
    if (!valid) continue;
    std::set<std::pair<int, std::string>> ins;
    std::set<int64_t> consts;
    int outs = 0;
    for (int v = 0; v < f.n; ++v) {
      if (!in_mask(m, v)) continue;
      for (const auto& [prod, name] : f.reg_in[v]) {
        if (prod < 0 || !in_mask(m, prod)) ins.insert({prod, name});
      }
      consts.insert(f.consts[v].begin(), f.consts[v].end());
      for (size_t k = 0; k < f.users[v].size(); ++k) {
        bool ext = f.live_out[v][k];
        for (int u : f.users[v][k]) ext = ext || !in_mask(m, u);
        if (ext) ++outs;
      }
    }
    SubsetInfo s{m, static_cast<int>(ins.size()), outs, static_cast<int>(consts.size())};
    if (s.n_in > c.n_i || s.n_out > c.n_o) continue;
    out.push_back(s);
  }
  return out;
}

uint64_t exhaustive_selection(const std::vector<CiCandidate>& cands, const CdfgProgram& p,
                              int budget_centi) {
  std::map<int, BlockFacts> facts;
  for (const CiCandidate& c : cands) {
    if (!facts.count(c.block_index)) facts.emplace(c.block_index, block_facts(p, c.block_index));
  }
  const size_t k = cands.size();
  uint64_t best = 0;
  for (uint32_t m = 0; m < (1u << k); ++m) {
    int64_t area = 0;
    uint64_t gain = 0;
    for (size_t i = 0; i < k; ++i) {
      if (!in_mask(m, static_cast<int>(i))) continue;
      area += static_cast<int64_t>(cands[i].area * 100.0 + 0.5);
      gain += cands[i].gain;
    }
    if (area > budget_centi || gain <= best) continue;
    bool valid = true;
    for (const auto& [bi, f] : facts) {
      // Contract each chosen candidate of this block to one vertex.
      std::vector<int> group(f.n);
      for (int v = 0; v < f.n; ++v) group[v] = v;
      for (size_t i = 0; i < k && valid; ++i) {
        if (!in_mask(m, static_cast<int>(i)) || cands[i].block_index != bi) continue;
        for (int v = 0; v < f.n; ++v) {
          if (!cands[i].nodes.test(v)) continue;
          if (group[v] != v) valid = false;
          group[v] = f.n + static_cast<int>(i);
        }
      }
      if (!valid) break;
      const int total = f.n + static_cast<int>(k);
      std::vector<std::set<int>> adj(total);
      for (int a = 0; a < f.n; ++a) {
        for (int b = 0; b < f.n; ++b) {
          if (f.edge[a][b] && group[a] != group[b]) adj[group[a]].insert(group[b]);
        }
      }
      std::vector<int> color(total, 0);
      std::function<bool(int)> cyclic = [&](int u) {
        color[u] = 1;
        for (int w : adj[u]) {
          if (color[w] == 1) return true;
          if (color[w] == 0 && cyclic(w)) return true;
        }
        color[u] = 2;
        return false;
      };
      for (int u = 0; u < total && valid; ++u) {
        if (color[u] == 0 && cyclic(u)) valid = false;
      }
      if (!valid) break;
    }
    if (valid) best = gain;
  }
  return best;
}

namespace {

using M = Mnemonic;

bool usable(M m, const MachineConfig& cfg) { return is_supported(m, cfg); }

Instruction random_alu(std::mt19937& rng, const MachineConfig& cfg, const std::vector<int>& dst,
                       const std::vector<int>& src, bool allow_muldiv) {
  static const M kRrr[] = {M::kAdd, M::kAddu, M::kSub, M::kSubu, M::kAnd, M::kOr, M::kXor,
                           M::kNor, M::kSrav, M::kSrlv, M::kSllv, M::kSlt, M::kSltu, M::kSeq,
                           M::kSne, M::kSle, M::kSleu, M::kMul, M::kMulu, M::kDiv, M::kDivu};
  static const M kShamt[] = {M::kSra, M::kSrl, M::kSll};
  static const M kImm8[] = {M::kAddi, M::kAndi, M::kOri, M::kXori};
  static const M kImm16[] = {M::kLli, M::kLhi, M::kLoli};
  auto any = [&](const std::vector<int>& v) { return v[rng() % v.size()]; };
  while (true) {
    const unsigned kind = rng() % 10;
    if (kind < 6) {
      M m = kRrr[rng() % std::size(kRrr)];
      if (!usable(m, cfg)) continue;
      if (!allow_muldiv && (info(m).feature == Feature::kMul || info(m).feature == Feature::kDiv)) continue;
      return make_rrr(m, any(dst), any(src), any(src));
    }
    if (kind < 7) {
      M m = kShamt[rng() % std::size(kShamt)];
      if (!usable(m, cfg)) continue;
      return make_rr_imm(m, any(dst), any(src), rng() % 32);
    }
    if (kind < 8) {
      M m = kImm8[rng() % std::size(kImm8)];
      if (!usable(m, cfg)) continue;
      return make_rr_imm(m, any(dst), any(src), rng() % 256);
    }
    if (kind < 9 && usable(M::kCvt, cfg)) {
      CvtSpec s{(rng() & 1) != 0, static_cast<uint8_t>(rng() % 3), static_cast<uint8_t>(rng() % 3)};
      return make_cvt(any(dst), any(src), s);
    }
    M m = kImm16[rng() % std::size(kImm16)];
    return make_imm16(m, any(dst), rng() & 0xFFFF);
  }
}

}  // namespace

ProgramImage random_program(std::mt19937& rng, const MachineConfig& cfg, int length) {
  const std::vector<int> dst = {0, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<int> src = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Instruction> prog = {make_imm16(M::kLli, 1, 0x100), make_imm16(M::kLli, 2, 0x182),
                                   make_imm16(M::kLli, 3, 0x1F3)};
  const int body = std::max(0, length - 4);
  std::vector<int> fixups;  // positions of forward control transfers
  for (int i = 0; i < body; ++i) {
    const unsigned r = rng() % 100;
    if (r < 12) {
      static const M kLoads[] = {M::kLw, M::kLb, M::kLbu, M::kLh, M::kLhu};
      M m = kLoads[rng() % 5];
      if (!usable(m, cfg)) m = M::kLw;
      const int size = m == M::kLw ? 4 : (m == M::kLh || m == M::kLhu) ? 2 : 1;
      const int base = size == 4 ? 1 : size == 2 ? 1 + static_cast<int>(rng() % 2) : 1 + static_cast<int>(rng() % 3);
      prog.push_back(make_load(m, dst[rng() % dst.size()], base));
    } else if (r < 20) {
      static const M kStores[] = {M::kSw, M::kSb, M::kSh};
      M m = kStores[rng() % 3];
      if (!usable(m, cfg)) m = M::kSw;
      const int size = m == M::kSw ? 4 : m == M::kSh ? 2 : 1;
      const int base = size == 4 ? 1 : size == 2 ? 1 + static_cast<int>(rng() % 2) : 1 + static_cast<int>(rng() % 3);
      prog.push_back(make_store(m, src[rng() % src.size()], base));
    } else if (r < 28) {
      const unsigned k = rng() % 4;
      if (k == 0) {
        prog.push_back(make_jump(M::kJ, 0));
      } else if (k == 1 && usable(M::kJal, cfg)) {
        prog.push_back(make_jump(M::kJal, 0));
      } else {
        prog.push_back(make_branch(k == 2 ? M::kBnez : M::kBeqz, src[rng() % src.size()], 0));
      }
      fixups.push_back(static_cast<int>(prog.size()) - 1);
    } else {
      prog.push_back(random_alu(rng, cfg, dst, src, true));
    }
  }
  prog.push_back(make_halt());
  const int last = static_cast<int>(prog.size()) - 1;
  for (int at : fixups) {
    const int target = at + 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(6, last - at)));
    Instruction& in = prog[at];
    if (in.mnemonic == M::kJ || in.mnemonic == M::kJal) {
      in.imm = static_cast<uint32_t>(target);
    } else {
      in.imm = static_cast<uint16_t>(target - at - 1);
    }
  }
  ProgramImage img;
  for (const Instruction& in : prog) img.code.push_back(encode(in, cfg));
  for (uint32_t a = 0x100; a < 0x200; ++a) img.data_init[a] = static_cast<uint8_t>(rng());
  return img;
}

ProgramImage random_alu_program(std::mt19937& rng, const MachineConfig& cfg, int length) {
  const std::vector<int> regs = {0, 1, 2, 3, 4, 5, 6, 7};
  ProgramImage img;
  for (int i = 0; i + 1 < length; ++i) img.code.push_back(encode(random_alu(rng, cfg, regs, regs, false), cfg));
  img.code.push_back(encode(make_halt(), cfg));
  return img;
}

}  // namespace byorisc::oracle
