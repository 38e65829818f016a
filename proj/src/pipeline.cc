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

#include "byorisc/pipeline.h"

#include <algorithm>
#include <stdexcept>

#include "byorisc/semantics.h"
#include "byorisc/text_util.h"

namespace byorisc {
namespace {

using M = Mnemonic;

struct Slot {
  bool valid = false;
  uint32_t pc = 0;
  Instruction in;
  std::string name;
  std::optional<Fault> fault;
  bool terminates = false;  // halt, syscal, break or faulted
  OperandInfo ops;
  std::vector<uint32_t> src_val;
  std::vector<uint32_t> dst_val;
  bool sid_done = false;
  int sid_reads = 0;
  bool executed = false;
  int hold = 0;
  int ci_step = 0;
  bool mem_done = false;
  uint32_t mem_addr = 0;
  uint64_t ready_at = 0;
  bool is_load = false;
  bool is_store = false;
  bool is_ctrl = false;
  bool is_mul4 = false;
  bool is_div = false;
  bool is_ci = false;
  bool ctrl_resolved = false;
  ZolcState zolc_before;
};

class Pipeline {
 public:
  Pipeline(const ProgramImage& image, const MachineConfig& cfg, const CiLibrary& cilib,
           const PipelineOptions& opts)
      : image_(image), cfg_(cfg), cilib_(cilib), opts_(opts) {
    n_ = cfg.n_pipe;
    sid_ = cfg.have_ci ? 1 : -1;
    id_ = cfg.have_ci ? 2 : 1;
    ex1_ = id_ + 1;
    exn_ = ex1_ + n_ - 1;
    wb_ = exn_ + 1;
    lat_.resize(wb_ + 1);
    st_ = initial_state(image, cfg);
    if (opts.zolc) zs_ = initial_zolc_state(*opts.zolc);
    for (const char* c : {kStallLoadUse, kStallMulticycle, kStallCiBusy, kStallNoForwarding,
                          kStallBranchFlush}) {
      res_.stalls[c] = 0;
    }
  }

  SimResult run() {
    if (opts_.trace) res_.trace.push_back(trace_header());
    while (!finished_) {
      if (cycle_ >= opts_.max_cycles) {
        res_.status = RunStatus::kBudgetExhausted;
        break;
      }
      ++cycle_;
      committed_now_.clear();
      mem_access_now_ = false;
      mem_transfers_ = 0;
      sid_reads_now_ = 0;
      cause_ = nullptr;
      if (!lat_[0].valid && fetch_on_) fetch();
      std::string row = opts_.trace ? occupancy() : std::string();

      do_wb();
      if (!finished_) {
        for (int s = exn_; s > ex1_; --s) do_late(s);
        const bool ex1_blocked = do_ex1();
        const bool id_blocked = !ex1_blocked && do_id();
        if (sid_ >= 0) do_sid();
        res_.max_mem_transfers = std::max(res_.max_mem_transfers, mem_transfers_);
        if (mem_transfers_ > 1) throw std::logic_error("two data memory transfers in one cycle");
        advance(ex1_blocked ? ex1_ : id_blocked ? id_ : -1);
      }
      if (opts_.trace) {
        row += std::string(",") + (cause_ ? cause_ : "") + "," + std::to_string(mem_transfers_) + "," +
               std::to_string(sid_reads_now_);
        res_.trace.push_back(row);
      }
    }
    res_.cycles = cycle_;
    res_.final_state = std::move(st_);
    return std::move(res_);
  }

 private:
  std::string trace_header() const {
    std::string h = "cycle,IF";
    if (sid_ >= 0) h += ",SID";
    h += ",ID";
    for (int k = 1; k <= n_; ++k) h += ",EX" + std::to_string(k);
    return h + ",WB,stall,mem_transfers,sid_reads";
  }

  std::string occupancy() const {
    std::string row = std::to_string(cycle_);
    for (const Slot& s : lat_) {
      row += ",";
      row += s.valid ? std::to_string(s.pc) + ":" + s.name : "-";
    }
    return row;
  }

  void set_fault(Slot& x, Fault f) {
    f.pc = x.pc;
    x.fault = f;
    x.terminates = true;
  }

  void fetch() {
    Slot x;
    x.valid = true;
    x.pc = fetch_pc_;
    x.zolc_before = zs_;
    if (x.pc >= image_.code.size()) {
      x.name = "?";
      set_fault(x, {FaultKind::kFetchOutOfRange, 0, 0, ""});
    } else if (auto d = decode(image_.code[x.pc], cfg_); !d) {
      x.name = "illegal";
      set_fault(x, {FaultKind::kIllegalInstruction, 0, 0, "word 0x" + hex(image_.code[x.pc], 8)});
    } else {
      x.in = *d;
      const M m = x.in.mnemonic;
      x.name = std::string(info(m).name);
      x.is_ci = m == M::kCi;
      if (x.is_ci) {
        auto b = image_.ci_bindings.find(x.in.opcode);
        x.name = "ci." + (b != image_.ci_bindings.end() ? b->second : hex(x.in.opcode, 2));
      }
      x.is_load = is_load(m);
      x.is_store = is_store(m);
      x.is_ctrl = is_control_transfer(m);
      x.is_mul4 = (m == M::kMul || m == M::kMulu) && cfg_.mult_tpl == MultTopology::kPipelined4;
      x.is_div = m == M::kDiv || m == M::kDivu;
      if (info(m).group == Group::kCP) {
        set_fault(x, {FaultKind::kUnimplemented, 0, 0, "coprocessor"});
      } else if (m == M::kHalt || m == M::kSyscal || m == M::kBreak) {
        x.terminates = true;
      } else if (!x.is_ci) {
        x.ops = operand_info(x.in, x.pc, image_, cfg_, cilib_);
      }
    }
    if (x.terminates) {
      fetch_on_ = false;
    } else {
      std::optional<uint32_t> z;
      if (opts_.zolc) z = zolc_step(*opts_.zolc, zs_, x.pc);
      fetch_pc_ = z ? *z : x.pc + 1;
    }
    lat_[0] = std::move(x);
  }

  void do_wb() {
    Slot& x = lat_[wb_];
    if (!x.valid) return;
    if (x.fault) {
      res_.status = RunStatus::kTrap;
      res_.fault = x.fault;
      st_.pc = x.pc;
      st_.halted = true;
      finished_ = true;
      return;
    }
    for (size_t k = 0; k < x.ops.dst.size(); ++k) {
      const uint8_t r = x.ops.dst[k];
      if (r == 0) continue;
      st_.regs[r] = x.dst_val[k];
      committed_now_.push_back(r);
      std::erase_if(mul_pending_, [r](const Pending& p) { return p.reg == r; });
      if (x.is_mul4 && x.ready_at > cycle_) mul_pending_.push_back({r, x.ready_at});
    }
    ++res_.retired;
    if (x.is_ci) {
      if (x.sid_reads != 1) throw std::logic_error("CI committed without exactly one SID read");
      ++res_.ci_executed;
    }
    const M m = x.in.mnemonic;
    if (m == M::kHalt || m == M::kSyscal || m == M::kBreak) {
      res_.status = m == M::kHalt ? RunStatus::kHalted
                    : m == M::kSyscal ? RunStatus::kSyscall
                                      : RunStatus::kBreak;
      st_.pc = x.pc;
      st_.halted = true;
      finished_ = true;
    }
  }

  void do_late(int s) {
    Slot& x = lat_[s];
    if (!x.valid || x.fault) return;
    if (s == exn_ && (x.is_load || x.is_store) && !x.mem_done) {
      x.mem_done = true;
      if (auto f = st_.dmem.check(x.in.mnemonic, x.mem_addr)) {
        set_fault(x, *f);
        return;
      }
      if (x.is_load) {
        x.dst_val = {st_.dmem.load(x.in.mnemonic, x.mem_addr)};
      } else {
        st_.dmem.store(x.in.mnemonic, x.mem_addr, x.src_val[1]);
      }
      mem_access_now_ = true;
      ++mem_transfers_;
    }
    if (s == ex1_ + 1 && !cfg_.br_early && x.is_ctrl && !x.ctrl_resolved) resolve_ctrl(x, s);
  }

  void resolve_ctrl(Slot& x, int stage) {
    x.ctrl_resolved = true;
    BranchOutcome b = resolve_control(x.in, x.src_val, x.pc);
    if (!b.taken) return;
    uint64_t flushed = 0;
    bool restored = false;
    for (int k = stage - 1; k >= 0; --k) {
      if (!lat_[k].valid) continue;
      if (!restored) {
        zs_ = lat_[k].zolc_before;
        restored = true;
      }
      ++flushed;
      lat_[k] = Slot();
    }
    res_.stalls[kStallBranchFlush] += flushed;
    fetch_pc_ = b.target;
    fetch_on_ = true;
  }

  bool is_complete(const Slot& p, int stage) const {
    if (p.is_load) return stage == wb_;
    if (p.is_mul4) return cycle_ >= p.ready_at;
    return true;
  }

  ForwardSnapshot snapshot() const {
    ForwardSnapshot snap;
    for (int s = ex1_ + 1; s <= wb_; ++s) {
      std::vector<ForwardPort> ports(cfg_.nwp);
      const Slot& p = lat_[s];
      if (p.valid && !p.fault) {
        for (size_t k = 0; k < p.ops.dst.size() && k < ports.size(); ++k) {
          ports[k] = {true, p.ops.dst[k], is_complete(p, s)};
        }
      }
      snap.stages.push_back(std::move(ports));
    }
    return snap;
  }

  static const char* cause_for(const Slot& producer) {
    if (producer.is_load) return kStallLoadUse;
    if (producer.is_ci) return kStallCiBusy;
    return kStallMulticycle;
  }

  // Fills x.src_val; false when some operand is not available yet.
  bool read_operands(Slot& x) {
    x.src_val.clear();
    ForwardSnapshot snap;
    if (cfg_.forwarding) snap = snapshot();
    for (uint8_t r : x.ops.src) {
      if (r == 0) {
        x.src_val.push_back(0);
        continue;
      }
      if (cfg_.forwarding) {
        ForwardChoice c = forward_select(r, snap, cfg_);
        if (c.pipe_sel > 0) {
          const Slot& p = lat_[ex1_ + c.pipe_sel];
          if (!c.complete) {
            cause_ = cause_for(p);
            return false;
          }
          x.src_val.push_back(p.dst_val[c.wp_sel]);
          continue;
        }
        for (const Pending& pm : mul_pending_) {
          if (pm.reg == r && pm.ready_at > cycle_) {
            cause_ = kStallMulticycle;
            return false;
          }
        }
      }
      x.src_val.push_back(st_.regs[r]);
    }
    return true;
  }

  void execute(Slot& x) {
    const M m = x.in.mnemonic;
    if (x.is_ci) {
      x.ci_step = 0;
    } else if (x.is_load || x.is_store) {
      x.mem_addr = x.src_val[0];
    } else if (x.is_ctrl) {
      if (m == M::kJal) x.dst_val = {x.pc + 1};
      if (cfg_.br_early) resolve_ctrl(x, ex1_);
    } else {
      x.dst_val = {compute_result(x.in, x.src_val, x.pc)};
      if (x.is_mul4) x.ready_at = cycle_ + 4;
      if (x.is_div) x.hold = 32;
    }
    x.executed = true;
  }

  bool ci_step(Slot& x) {
    const CiBehavior& ci = *x.ops.ci;
    const char ms = ci.mem_states[x.ci_step];
    if (ms != '-' && mem_access_now_) {
      cause_ = kStallCiBusy;
      return true;
    }
    if (x.ci_step == 0) {
      if (auto f = execute_ci(ci, x.src_val, x.dst_val, st_.dmem)) {
        set_fault(x, *f);
        return false;
      }
    }
    if (ms != '-') {
      mem_access_now_ = true;
      ++mem_transfers_;
    }
    if (++x.ci_step < ci.hw_cycles) {
      cause_ = kStallCiBusy;
      return true;
    }
    return false;
  }

  bool do_ex1() {
    Slot& x = lat_[ex1_];
    if (!x.valid || x.terminates) return false;
    if (!x.executed) {
      for (int s = ex1_ + 1; s <= wb_; ++s) {
        if (lat_[s].valid && lat_[s].fault) return true;  // drain behind a trap
      }
      if (x.is_ci && x.ops.ci->has_memory()) {
        for (int s = ex1_ + 1; s < exn_; ++s) {
          const Slot& p = lat_[s];
          if (p.valid && (p.is_load || p.is_store) && !p.mem_done) {
            cause_ = kStallCiBusy;
            return true;
          }
        }
      }
      if (!read_operands(x)) return true;
      execute(x);
    }
    if (x.is_div) {
      if (--x.hold > 0) {
        cause_ = kStallMulticycle;
        return true;
      }
      return false;
    }
    if (x.is_ci) return ci_step(x);
    return false;
  }

  static bool writes(const Slot& p, uint8_t r) {
    return std::find(p.ops.dst.begin(), p.ops.dst.end(), r) != p.ops.dst.end();
  }

  bool do_id() {
    Slot& x = lat_[id_];
    if (!x.valid) return false;
    for (int s = ex1_; s <= exn_; ++s) {
      if (lat_[s].valid && lat_[s].terminates) return true;  // drain, not a stall
    }
    if (cfg_.forwarding) return false;
    for (uint8_t r : x.ops.src) {
      if (r == 0) continue;
      bool busy = std::find(committed_now_.begin(), committed_now_.end(), r) != committed_now_.end();
      for (int s = ex1_; s <= exn_ && !busy; ++s) busy = lat_[s].valid && writes(lat_[s], r);
      for (const Pending& pm : mul_pending_) busy = busy || (pm.reg == r && pm.ready_at >= cycle_);
      if (busy) {
        cause_ = kStallNoForwarding;
        return true;
      }
    }
    return false;
  }

  void do_sid() {
    Slot& x = lat_[sid_];
    if (!x.valid || !x.is_ci || x.sid_done) return;
    x.sid_done = true;
    ++x.sid_reads;
    ++sid_reads_now_;
    x.ops = operand_info(x.in, x.pc, image_, cfg_, cilib_);
    if (x.ops.fault) set_fault(x, *x.ops.fault);
  }

  void advance(int blocked) {
    if (blocked < 0) {
      for (int s = wb_; s >= 1; --s) lat_[s] = std::move(lat_[s - 1]);
      lat_[0] = Slot();
      return;
    }
    for (int s = wb_; s >= blocked + 2; --s) lat_[s] = std::move(lat_[s - 1]);
    lat_[blocked + 1] = Slot();
    if (cause_) ++res_.stalls[cause_];
  }

  struct Pending {
    uint8_t reg;
    uint64_t ready_at;
  };

  const ProgramImage& image_;
  const MachineConfig& cfg_;
  const CiLibrary& cilib_;
  const PipelineOptions& opts_;
  int n_ = 2, sid_ = -1, id_ = 1, ex1_ = 2, exn_ = 3, wb_ = 4;
  std::vector<Slot> lat_;
  MachineState st_;
  ZolcState zs_;
  uint32_t fetch_pc_ = 0;
  bool fetch_on_ = true;
  uint64_t cycle_ = 0;
  SimResult res_;
  std::vector<Pending> mul_pending_;
  std::vector<uint8_t> committed_now_;
  bool mem_access_now_ = false;
  int mem_transfers_ = 0;
  int sid_reads_now_ = 0;
  const char* cause_ = nullptr;
  bool finished_ = false;
};

}  // namespace

uint64_t SimResult::total_stalls() const {
  uint64_t t = 0;
  for (const auto& [k, v] : stalls) t += v;
  return t;
}

ForwardChoice forward_select(uint8_t read_addr, const ForwardSnapshot& snap, const MachineConfig&) {
  if (read_addr == 0) return {};
  for (size_t s = 0; s < snap.stages.size(); ++s) {
    const auto& ports = snap.stages[s];
    for (size_t p = ports.size(); p-- > 0;) {
      if (ports[p].valid && ports[p].addr == read_addr) {
        return {static_cast<int>(s + 1), static_cast<int>(p), ports[p].complete};
      }
    }
  }
  return {};
}

SimResult run_pipeline(const ProgramImage& image, const MachineConfig& cfg, const CiLibrary& cilib,
                       const PipelineOptions& opts) {
  return Pipeline(image, cfg, cilib, opts).run();
}

}  // namespace byorisc
