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

#include <random>

#include "byorisc/assembler.h"
#include "byorisc/config.h"
#include "byorisc/error.h"
#include "byorisc/iseq.h"
#include "byorisc/iss.h"
#include "byorisc/pipeline.h"
#include "byorisc/zolc.h"
#include "doctest.h"
#include "oracles.h"

namespace byorisc {
namespace {

struct Run {
  IssResult iss;
  SimResult pipe;
};

Run run_both(const std::string& src, const MachineConfig& cfg, const CiLibrary& lib = {},
             const std::string& zolc = "") {
  ProgramImage img = assemble(src, cfg);
  std::optional<ZolcTable> z;
  if (!zolc.empty()) z = parse_zolc(zolc, "<zolc>", &img);
  Run r;
  r.iss = run_iss(img, cfg, lib, 1'000'000, z ? &*z : nullptr);
  PipelineOptions po;
  po.trace = true;
  po.zolc = z ? &*z : nullptr;
  r.pipe = run_pipeline(img, cfg, lib, po);
  REQUIRE(r.iss.status == RunStatus::kHalted);
  REQUIRE(r.pipe.status == RunStatus::kHalted);
  CHECK(r.iss.state.regs == r.pipe.final_state.regs);
  CHECK(r.iss.state.dmem == r.pipe.final_state.dmem);
  CHECK(r.iss.retired == r.pipe.retired);
  return r;
}

uint64_t stall(const SimResult& r, const char* cause) {
  auto it = r.stalls.find(cause);
  return it == r.stalls.end() ? 0 : it->second;
}

TEST_SUITE("sim") {

TEST_CASE("ISS arithmetic examples") {
  MachineConfig cfg = testbed_config();
  Run a = run_both("lli r1, 7\nlli r2, 5\nsub r3, r1, r2\nhalt\n", cfg);
  CHECK(a.iss.state.regs[3] == 2u);
  Run b = run_both("lli r5, 0xBEEF\nlhi r5, 0xDEAD\nhalt\n", cfg);
  CHECK(b.iss.state.regs[5] == 0xDEADBEEFu);
  Run c = run_both("lli r1, 1\nlli r2, 0xFFFF\nlhi r2, 0xFFFF\nsltu r4, r1, r2\nhalt\n", cfg);
  CHECK(c.iss.state.regs[4] == 1u);
  Run d = run_both("lli r1, 3\nlli r2, 4\nadd r3, r1, r2\nhalt\n", cfg);
  CHECK(d.iss.state.regs[3] == 7u);
  CHECK(d.iss.retired == 4);
}

TEST_CASE("r0 stays zero") {
  Run r = run_both("lli r0, 5\nadd r1, r0, r0\nhalt\n", testbed_config());
  CHECK(r.iss.state.regs[0] == 0u);
  CHECK(r.iss.state.regs[1] == 0u);
}

TEST_CASE("empty program faults on fetch") {
  ProgramImage img;
  IssResult r = run_iss(img, MachineConfig{}, {}, 10);
  CHECK(r.status == RunStatus::kTrap);
  REQUIRE(r.fault);
  CHECK(r.fault->kind == FaultKind::kFetchOutOfRange);
  CHECK(run_pipeline(img, MachineConfig{}, {}).status == RunStatus::kTrap);
}

TEST_CASE("budget exhaustion is distinct from halt") {
  ProgramImage img = assemble("top: j top\n", MachineConfig{});
  CHECK(run_iss(img, MachineConfig{}, {}, 50).status == RunStatus::kBudgetExhausted);
  PipelineOptions po;
  po.max_cycles = 50;
  CHECK(run_pipeline(img, MachineConfig{}, {}, po).status == RunStatus::kBudgetExhausted);
}

TEST_CASE("memory faults") {
  MachineConfig cfg;
  CHECK(run_iss(assemble("lli r1, 2\nlw r2, (r1)\nhalt\n", cfg), cfg, {}, 10).fault->kind ==
        FaultKind::kMisaligned);
  CHECK(run_iss(assemble("lli r1, 0x2000\nlw r2, (r1)\nhalt\n", cfg), cfg, {}, 10).fault->kind ==
        FaultKind::kAddressRange);
  CHECK(run_iss(assemble("syscal\n", cfg), cfg, {}, 10).status == RunStatus::kSyscall);
  CHECK(run_iss(assemble("break\n", cfg), cfg, {}, 10).status == RunStatus::kBreak);
}

TEST_CASE("little-endian data memory") {
  Run r = run_both("lli r1, 0x40\nlli r2, 0x0304\nlhi r2, 0x0102\nsw r2, (r1)\nlbu r3, (r1)\n"
                   "lli r4, 0x43\nlb r5, (r4)\nhalt\n",
                   testbed_config());
  CHECK(r.iss.state.regs[3] == 4u);
  CHECK(r.iss.state.regs[5] == 1u);
}

TEST_CASE("pipeline fill on independent ops") {
  MachineConfig cfg = testbed_config();
  std::string src;
  const int n = 12;
  for (int i = 0; i < n; ++i) src += "add r" + std::to_string(10 + i) + ", r1, r2\n";
  src += "halt\n";
  Run r = run_both(src, cfg);
  CHECK(r.pipe.cycles == static_cast<uint64_t>(n + 1 + 5));
  CHECK(r.pipe.total_stalls() == 0);
  MachineConfig five;
  Run f = run_both(src, five);
  CHECK(f.pipe.cycles == static_cast<uint64_t>(n + 1 + 4));
}

TEST_CASE("load-use costs one stall") {
  Run r = run_both("lw r1, (r2)\nadd r3, r1, r4\nhalt\n", testbed_config());
  CHECK(stall(r.pipe, kStallLoadUse) == 1);
  CHECK(r.pipe.cycles == 3 + 5 + 1);
  Run far = run_both("lw r1, (r2)\nadd r5, r6, r7\nadd r3, r1, r4\nhalt\n", testbed_config());
  CHECK(far.pipe.total_stalls() == 0);
}

TEST_CASE("without forwarding a distance-one dependency costs three") {
  MachineConfig cfg = testbed_config();
  cfg.forwarding = false;
  const int n = 6;
  std::string src = "";
  for (int i = 0; i < n; ++i) src += "add r1, r1, r2\n";
  src += "halt\n";
  Run r = run_both(src, cfg);
  CHECK(stall(r.pipe, kStallNoForwarding) == 3u * (n - 1));
  CHECK(r.pipe.cycles == static_cast<uint64_t>(n + 1 + 5 + 3 * (n - 1)));
  Run d2 = run_both("add r1, r1, r2\nadd r5, r6, r7\nadd r3, r1, r1\nhalt\n", cfg);
  CHECK(stall(d2.pipe, kStallNoForwarding) == 2);
}

TEST_CASE("taken branch penalties") {
  const std::string src = "lli r1, 1\nbnez r1, t\nadd r2, r2, r2\nadd r3, r3, r3\nt: halt\n";
  MachineConfig six = testbed_config();
  CHECK(run_both(src, six).pipe.cycles == 3 + 5 + 3);
  six.br_early = false;
  CHECK(run_both(src, six).pipe.cycles == 3 + 5 + 4);
  MachineConfig five;
  CHECK(run_both(src, five).pipe.cycles == 3 + 4 + 2);
  five.br_early = false;
  CHECK(run_both(src, five).pipe.cycles == 3 + 4 + 3);
  const std::string not_taken = "bnez r0, t\nt: halt\n";
  CHECK(run_both(not_taken, testbed_config()).pipe.cycles == 2 + 5);
}

TEST_CASE("multiplier and divider timing") {
  MachineConfig cfg = testbed_config();
  cfg.mult_tpl = MultTopology::kPipelined4;
  Run indep = run_both("mul r1, r2, r3\nmul r4, r2, r3\nhalt\n", cfg);
  CHECK(indep.pipe.total_stalls() == 0);
  Run dep = run_both("lli r2, 3\nlli r3, 5\nmul r1, r2, r3\nadd r4, r1, r1\nhalt\n", cfg);
  CHECK(stall(dep.pipe, kStallMulticycle) > 0);
  CHECK(dep.iss.state.regs[4] == 30u);
  Run single = run_both("lli r2, 3\nlli r3, 5\nmul r1, r2, r3\nadd r4, r1, r1\nhalt\n", testbed_config());
  CHECK(single.pipe.total_stalls() == 0);
  Run div = run_both("lli r2, 100\nlli r3, 7\ndiv r1, r2, r3\nhalt\n", testbed_config());
  CHECK(div.iss.state.regs[1] == 14u);
  CHECK(div.pipe.cycles == 4 + 5 + 31);
}

TEST_CASE("forward_select picks the youngest match") {
  MachineConfig cfg = testbed_config();
  cfg.nwp = 2;
  ForwardSnapshot snap;
  snap.stages = {{{false, 0, true}, {true, 7, true}}, {{true, 9, true}, {false, 0, true}}};
  CHECK(forward_select(7, snap, cfg) == ForwardChoice{1, 1, true});
  CHECK(forward_select(9, snap, cfg) == ForwardChoice{2, 0, true});
  CHECK(forward_select(5, snap, cfg).pipe_sel == 0);
  snap.stages[1][0] = {true, 7, true};
  CHECK(forward_select(7, snap, cfg).pipe_sel == 1);
  snap.stages[0][1].complete = false;
  CHECK_FALSE(forward_select(7, snap, cfg).complete);
  CHECK(forward_select(0, snap, cfg).pipe_sel == 0);
}

TEST_CASE("custom instruction execution") {
  MachineConfig cfg = testbed_config();
  CiLibrary lib = parse_ci_library(
      "ci mac in 3 out 1 cycles 2 mem - -\n"
      "  t0 = mul i0 i1\n  t1 = add t0 i2\n  ret t1\nendci\n"
      "ci ldst in 2 out 1 cycles 2 mem L S\n"
      "  t0 = lw i0\n  sw t0 i1\n  t1 = add t0 $1\n  ret t1\nendci\n");
  Run r = run_both(
      "lli r1, 3\nlli r2, 4\nlli r3, 5\n"
      "ci mac, occ=0, out=(r4), in=(r1,r2,r3)\n"
      "add r5, r4, r4\n"
      "lli r6, 0x20\nlli r7, 0x30\nsw r5, (r6)\n"
      "ci ldst, occ=1, out=(r8), in=(r6,r7)\n"
      "lw r9, (r7)\nhalt\n",
      cfg, lib);
  CHECK(r.iss.state.regs[4] == 17u);
  CHECK(r.iss.state.regs[5] == 34u);
  CHECK(r.iss.state.regs[8] == 35u);
  CHECK(r.iss.state.regs[9] == 34u);
  CHECK(r.pipe.ci_executed == 2);
  CHECK(r.pipe.max_mem_transfers <= 1);
  CHECK(r.pipe.cycles >= r.pipe.retired + 5);
}

TEST_CASE("missing CI pieces trap") {
  MachineConfig cfg = testbed_config();
  ProgramImage img = assemble("ci nope, occ=0, out=(r1), in=(r2)\nhalt\n", cfg);
  IssResult r = run_iss(img, cfg, {}, 10);
  CHECK(r.status == RunStatus::kTrap);
  CHECK(r.fault->kind == FaultKind::kMissingCi);
  img.sid_table.clear();
  CHECK(run_iss(img, cfg, {}, 10).fault->kind == FaultKind::kMissingSid);
  CHECK(run_pipeline(img, cfg, {}).status == RunStatus::kTrap);
}

TEST_CASE("trace columns and memory-port invariant") {
  MachineConfig cfg = testbed_config();
  Run r = run_both("lli r1, 8\nsw r1, (r1)\nlw r2, (r1)\nadd r3, r2, r2\nhalt\n", cfg);
  REQUIRE(!r.pipe.trace.empty());
  CHECK(r.pipe.trace[0].rfind("cycle,IF,SID,ID,EX1,EX2,WB,stall", 0) == 0);
  CHECK(r.pipe.trace.size() == r.pipe.cycles + 1);
  CHECK(r.pipe.max_mem_transfers == 1);
}

TEST_CASE("ZOLC step semantics") {
  ZolcTable t;
  t.entries.push_back({10, ZolcKind::kBackward, 0, 0, 1, 2, 4, 11});
  t.entries.push_back({20, ZolcKind::kForward, 0, 0, 0, 0, 30, 0});
  validate_zolc(t);
  ZolcState s = initial_zolc_state(t);
  CHECK_FALSE(zolc_step(t, s, 9));
  CHECK(zolc_step(t, s, 10) == 4u);
  CHECK(s.counters[0] == 1u);
  CHECK(zolc_step(t, s, 10) == 4u);
  CHECK(s.counters[0] == 2u);
  CHECK(zolc_step(t, s, 10) == 11u);
  CHECK(s.counters[0] == 0u);
  CHECK(zolc_step(t, s, 20) == 30u);
  CHECK(trip_count(t.entries[0]) == 3u);
}

TEST_CASE("ZOLC tables are validated") {
  CHECK_THROWS_AS(parse_zolc("backward last=1 ctr=0 init=0 step=2 bound=3 cont=0 exit=2\n"), InputError);
  CHECK_THROWS_AS(parse_zolc("forward last=1 cont=0\nforward last=1 cont=2\n"), InputError);
  CHECK_THROWS_AS(parse_zolc("sideways last=1\n"), ParseError);
  ZolcTable t = parse_zolc("backward last=3 ctr=1 init=10 step=-2 bound=0 cont=1 exit=4\n");
  CHECK(trip_count(t.entries[0]) == 6u);
  CHECK(parse_zolc(serialize_zolc(t)).entries.size() == 1);
}

TEST_CASE("ZOLC fixtures match their branch versions") {
  MachineConfig cfg = testbed_config();
  for (const char* k : {"loop", "nest"}) {
    Run br = run_both(oracle::fixture(std::string("zolc/") + k + "_branch.s"), cfg);
    Run zo = run_both(oracle::fixture(std::string("zolc/") + k + "_zolc.s"), cfg, {},
                      oracle::fixture(std::string("zolc/") + k + "_zolc.zolc"));
    CHECK(br.iss.state.regs == zo.iss.state.regs);
    CHECK(br.iss.state.dmem == zo.iss.state.dmem);
    CHECK(zo.pipe.cycles < br.pipe.cycles);
    CHECK(stall(zo.pipe, kStallBranchFlush) == 0);
  }
}

TEST_CASE("random programs run in lockstep") {
  std::mt19937 rng(99);
  std::vector<MachineConfig> cfgs = {MachineConfig{}, testbed_config()};
  MachineConfig slow = testbed_config();
  slow.forwarding = false;
  slow.br_early = false;
  slow.mult_tpl = MultTopology::kPipelined4;
  slow.n_pipe = 3;
  cfgs.push_back(slow);
  for (int k = 0; k < 150; ++k) {
    const MachineConfig& cfg = cfgs[k % cfgs.size()];
    ProgramImage img = oracle::random_program(rng, cfg, 20 + static_cast<int>(rng() % 180));
    IssResult iss = run_iss(img, cfg, {}, 100'000);
    SimResult pipe = run_pipeline(img, cfg, {});
    REQUIRE(iss.status == RunStatus::kHalted);
    REQUIRE(pipe.status == RunStatus::kHalted);
    CHECK(iss.state.regs == pipe.final_state.regs);
    CHECK(iss.state.dmem == pipe.final_state.dmem);
    CHECK(iss.state.pc == pipe.final_state.pc);
    CHECK(pipe.cycles >= pipe.retired + cfg.pipeline_stages() - 1);
  }
}

TEST_CASE("forwarding changes timing only") {
  std::mt19937 rng(3);
  for (int k = 0; k < 60; ++k) {
    MachineConfig on = testbed_config();
    MachineConfig off = on;
    off.forwarding = false;
    ProgramImage img = oracle::random_program(rng, on, 30 + static_cast<int>(rng() % 100));
    SimResult a = run_pipeline(img, on, {});
    SimResult b = run_pipeline(img, off, {});
    CHECK(a.final_state.regs == b.final_state.regs);
    CHECK(a.final_state.dmem == b.final_state.dmem);
    CHECK(a.cycles <= b.cycles);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace byorisc
