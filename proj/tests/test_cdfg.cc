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

#include <algorithm>
#include <random>

#include "byorisc/dfg.h"
#include "byorisc/error.h"
#include "byorisc/iseq.h"
#include "doctest.h"
#include "oracles.h"

namespace byorisc {
namespace {

Dfg one_block(const std::string& body, const std::string& live = "") {
  std::string text = "proc t\n" + (live.empty() ? "" : "live " + live + "\n") + "bb b freq 1\n" + body + "end\n";
  CdfgProgram p = parse_iseq(text);
  return build_program_dfgs(p)[0];
}

bool has_edge(const Dfg& g, int from, int to, EdgeKind k) {
  return std::find(g.edges.begin(), g.edges.end(), DfgEdge{from, to, k}) != g.edges.end();
}

TEST_SUITE("cdfg") {

TEST_CASE("parse a two-block program") {
  CdfgProgram p = parse_iseq(
      "proc two\n"
      "bb L0 freq 1\n  a = li $1\n"
      "bb L1 freq 4096\n  b = add a $2\n  bnez b @L1\n"
      "end\n");
  CHECK(p.name == "two");
  REQUIRE(p.blocks.size() == 2);
  CHECK(p.blocks[1].freq == 4096u);
  CHECK(p.blocks[1].ops.back().is_cti);
  CHECK(p.block_index("L1") == 1);
  CdfgProgram again = parse_iseq(serialize_iseq(p));
  CHECK(serialize_iseq(again) == serialize_iseq(p));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_iseq("proc t\nbb b freq 1\n  a = add x\nend\n");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_iseq("proc t\nbb b freq 1\n  a = frob x y\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_iseq("proc t\nbb b freq 1\nbb b freq 2\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_iseq("proc t\nbb b freq x\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_iseq("proc t\nbb b freq 1\n  bnez a @b\n  c = add a a\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_iseq("bb b freq 1\nend\n"), ParseError);
}

TEST_CASE("def-use edge") {
  Dfg g = one_block("  a = add x y\n  b = sub a z\n");
  CHECK(has_edge(g, 0, 1, EdgeKind::kData));
  CHECK(g.live_in == std::set<std::string>{"x", "y", "z"});
}

TEST_CASE("memory ops are serialized") {
  Dfg g = one_block("  sw v p\n  x = lw q\n  y = add v q\n");
  CHECK(has_edge(g, 0, 1, EdgeKind::kMemory));
  CHECK(g.anc[2].none());
}

TEST_CASE("diamond") {
  Dfg g = one_block("  a = add x y\n  b = sll a $1\n  c = srl a $2\n  d = or b c\n");
  CHECK(g.size() == 4);
  int data = 0;
  for (const DfgEdge& e : g.edges) data += e.kind == EdgeKind::kData;
  CHECK(data == 4);
  CHECK(g.desc[0].count() == 3);
}

TEST_CASE("redefinition orders readers before the new definition") {
  Dfg g = one_block("  b = add a $1\n  a = sub x y\n  c = add a b\n", "a c");
  CHECK(has_edge(g, 0, 1, EdgeKind::kAnti));
  CHECK(g.sources[2][0].node == 1);
  CHECK(g.live_out_port[1][0]);
}

TEST_CASE("ASAP metrics") {
  Dfg chain = one_block("  a = add x $1\n  b = add a $1\n  c = add b $1\n  d = add c $1\n  e = add d $1\n");
  IlpMetrics m = asap_metrics(chain);
  CHECK(m.max_ilp == 1);
  CHECK(m.csteps == 5);
  CHECK(m.avg_ilp == make_rational(1, 1));
  std::string flat;
  for (int i = 0; i < 10; ++i) flat += "  v" + std::to_string(i) + " = add x $" + std::to_string(i) + "\n";
  IlpMetrics f = asap_metrics(one_block(flat));
  CHECK(f.max_ilp == 10);
  CHECK(f.csteps == 1);
  CHECK(f.avg_ilp.value() == doctest::Approx(10.0));
  CHECK(make_rational(10, 5) == make_rational(2, 1));
}

TEST_CASE("DOT export") {
  Dfg one = one_block("  a = add x y\n");
  std::string d = export_dot(one);
  CHECK(d.rfind("digraph", 0) == 0);
  CHECK(d.find("0: add") != std::string::npos);
  CHECK(export_dot(one) == d);
  CdfgProgram p = parse_iseq(oracle::fixture("fsdither2.iseq"));
  Dfg g = build_program_dfgs(p)[0];
  NodeSet s;
  for (int v = 0; v < 9; ++v) s.set(v);
  std::string sub = export_dot(g, s, "fsdither1");
  auto count = [&](const std::string& needle) {
    size_t n = 0;
    for (size_t at = sub.find(needle); at != std::string::npos; at = sub.find(needle, at + 1)) ++n;
    return n;
  };
  CHECK(count("shape=invtriangle") == 3);
  CHECK(count("shape=triangle") == 2);
}

TEST_CASE("random blocks give acyclic graphs with consistent levels") {
  std::mt19937 rng(17);
  for (int k = 0; k < 300; ++k) {
    CdfgProgram p = parse_iseq(oracle::random_dag_iseq(rng, 1 + static_cast<int>(rng() % 30)));
    Dfg g = build_program_dfgs(p)[0];
    std::vector<int> lv = asap_levels(g);
    for (int v = 0; v < g.size(); ++v) {
      CHECK_FALSE(g.desc[v].test(v));
      int want = 1;
      for (int u : g.sched_pred[v]) want = std::max(want, lv[u] + 1);
      CHECK(lv[v] == want);
    }
    for (const DfgEdge& e : g.edges) CHECK(e.from < e.to);
    IlpMetrics m = asap_metrics(g);
    CHECK(m.csteps == *std::max_element(lv.begin(), lv.end()));
    CHECK(m.avg_ilp.num * m.csteps == static_cast<int64_t>(m.num_ops) * m.avg_ilp.den);
  }
}

TEST_CASE("ISeq interpreter") {
  CdfgProgram p = parse_iseq(
      "proc t\nlive s\nword 0x10 5 6\n"
      "bb i freq 1\n  p = li $16\n  s = li $0\n  n = li $2\n"
      "bb l freq 2\n  x = lw p\n  s = add s x\n  p = addi p $4\n  n = addi n $-1\n  bnez n @l\n"
      "end\n");
  IseqRun r = run_iseq(p, 256, 1000);
  CHECK_FALSE(r.fault);
  CHECK(r.values["s"] == 11u);
  CHECK(r.block_counts == std::vector<uint64_t>{1, 2});
}

}  // TEST_SUITE

}  // namespace
}  // namespace byorisc
