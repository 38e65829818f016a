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
#include <set>

#include "byorisc/bxir.h"
#include "byorisc/cigen.h"
#include "byorisc/dfg.h"
#include "byorisc/error.h"
#include "byorisc/isomorphism.h"
#include "byorisc/iseq.h"
#include "doctest.h"
#include "oracles.h"

namespace byorisc {
namespace {

const Bxir& kernels() {
  static const Bxir b = parse_bxir(oracle::fixture("kernels.bxir"));
  return b;
}

struct Prog {
  CdfgProgram p;
  std::vector<Dfg> g;
};

Prog load(const std::string& text) {
  Prog r{parse_iseq(text), {}};
  r.g = build_program_dfgs(r.p);
  return r;
}

Prog one_block(const std::string& body, const std::string& live) {
  return load("proc t\nlive " + live + "\nbb b freq 10\n" + body + "end\n");
}

NodeSet set_of(std::initializer_list<int> ids) {
  NodeSet s;
  for (int v : ids) s.set(v);
  return s;
}

uint32_t mask_of(const NodeSet& s) {
  uint32_t m = 0;
  for (int v = 0; v < 32; ++v) m |= s.test(v) ? 1u << v : 0u;
  return m;
}

std::set<uint32_t> masks(const std::vector<CiCandidate>& cs) {
  std::set<uint32_t> out;
  for (const auto& c : cs) out.insert(mask_of(c.nodes));
  return out;
}

const char* kChain = "  a = add x $1\n  b = add a $1\n  c = add b $1\n";
const char* kDiamond = "  a = add x y\n  b = sll a $1\n  c = srl a $2\n  d = or b c\n";

TEST_SUITE("cigen") {

TEST_CASE("convexity") {
  Prog c = one_block(kChain, "c");
  CHECK_FALSE(is_convex(c.g[0], set_of({0, 2})));
  CHECK(is_convex(c.g[0], set_of({0, 1, 2})));
  for (int v = 0; v < 3; ++v) CHECK(is_convex(c.g[0], set_of({v})));
}

TEST_CASE("three-node chain has six candidates") {
  Prog c = one_block(kChain, "c");
  CiConstraints k;
  k.n_i = k.n_o = 2;
  MimoResult r = enumerate_mimo(c.g[0], 0, k, kernels(), false);
  CHECK(masks(r.candidates) == std::set<uint32_t>{1, 2, 4, 3, 6, 7});
}

TEST_CASE("diamond with one output") {
  Prog d = one_block(kDiamond, "d");
  CiConstraints k;
  k.n_o = 1;
  MimoResult r = enumerate_mimo(d.g[0], 0, k, kernels(), false);
  CHECK(masks(r.candidates).count(0xF));
  for (const CiCandidate& c : r.candidates) CHECK(c.n_out <= 1);
}

TEST_CASE("constants do not use input ports") {
  Prog c = one_block(kChain, "c");
  CiCandidate all = make_candidate(c.g[0], 0, set_of({0, 1, 2}), &kernels());
  CHECK(all.n_in == 1);
  CHECK(all.n_out == 1);
  CHECK(all.n_const == 1);
}

TEST_CASE("exhaustive MIMO equals brute force") {
  std::mt19937 rng(23);
  for (int k = 0; k < 120; ++k) {
    Prog pr = load(oracle::random_dag_iseq(rng, 1 + static_cast<int>(rng() % 10)));
    CiConstraints c;
    c.n_i = 1 + static_cast<int>(rng() % 4);
    c.n_o = 1 + static_cast<int>(rng() % 3);
    if (rng() % 4 == 0) c.forbidden_opcodes.insert("mul");
    std::vector<oracle::SubsetInfo> want = oracle::brute_force_subsets(pr.p, 0, c);
    MimoResult got = enumerate_mimo(pr.g[0], 0, c, kernels(), false);
    std::vector<oracle::SubsetInfo> have;
    for (const CiCandidate& x : got.candidates) have.push_back({mask_of(x.nodes), x.n_in, x.n_out, x.n_const});
    std::sort(want.begin(), want.end());
    std::sort(have.begin(), have.end());
    CHECK(have == want);
    MimoResult pruned = enumerate_mimo(pr.g[0], 0, c, kernels(), true);
    REQUIRE(got.best.has_value() == pruned.best.has_value());
    if (got.best) {
      CHECK(mask_of(got.best->nodes) == mask_of(pruned.best->nodes));
      CHECK(got.best->gain == pruned.best->gain);
      CHECK(pruned.visits <= got.visits);
    }
  }
}

TEST_CASE("every candidate respects the constraints") {
  std::mt19937 rng(29);
  for (int k = 0; k < 40; ++k) {
    Prog pr = load(oracle::random_dag_iseq(rng, 14));
    CiConstraints c;
    c.n_i = 2;
    c.n_o = 1;
    c.max_nodes = 4;
    for (const CiCandidate& x : enumerate_mimo(pr.g[0], 0, c, kernels(), false).candidates) {
      CHECK(is_convex(pr.g[0], x.nodes));
      CHECK(x.n_in <= 2);
      CHECK(x.n_out <= 1);
      CHECK(x.size() <= 4);
      for (int v : x.node_ids()) CHECK_FALSE(pr.g[0].nodes[v].is_cti);
    }
  }
}

TEST_CASE("memory ops need allow_mem") {
  Prog m = one_block("  a = lw p\n  b = add a $1\n  sw b p\n", "b");
  CiConstraints c;
  for (const CiCandidate& x : enumerate_mimo(m.g[0], 0, c, kernels(), false).candidates) {
    CHECK(mask_of(x.nodes) == 2u);
  }
  c.allow_mem = true;
  CHECK(masks(enumerate_mimo(m.g[0], 0, c, kernels(), false).candidates).count(7));
}

TEST_CASE("visit budget truncates") {
  std::mt19937 rng(31);
  Prog pr = load(oracle::random_dag_iseq(rng, 20));
  CiConstraints c;
  c.visit_budget = 10;
  MimoResult r = enumerate_mimo(pr.g[0], 0, c, kernels(), false);
  CHECK(r.truncated);
  CHECK(r.visits <= 10);
}

TEST_CASE("MAXMISO examples") {
  Prog chain = one_block("  a = add x $1\n  b = add a $1\n  c = add b $1\n  d = add c $1\n  e = add d $1\n", "e");
  auto m = enumerate_maxmiso(chain.g[0], 0, kernels());
  REQUIRE(m.size() == 1);
  CHECK(m[0].size() == 5);
  Prog fan = one_block("  a = add x y\n  b = sll a $1\n  c = srl a $2\n  d = add b $1\n  e = add c $1\n", "d e");
  auto f = enumerate_maxmiso(fan.g[0], 0, kernels());
  CHECK(masks(f) == std::set<uint32_t>{1, 0b01010, 0b10100});
}

TEST_CASE("MAXMISO cones are disjoint and cover eligible nodes") {
  std::mt19937 rng(37);
  for (int k = 0; k < 200; ++k) {
    Prog pr = load(oracle::random_dag_iseq(rng, 1 + static_cast<int>(rng() % 25)));
    const Dfg& g = pr.g[0];
    NodeSet seen;
    for (const CiCandidate& c : enumerate_maxmiso(g, 0, kernels())) {
      CHECK((seen & c.nodes).none());
      seen |= c.nodes;
      CHECK(c.n_out <= 1);
      CHECK(is_convex(g, c.nodes));
    }
    for (int v = 0; v < g.size(); ++v) CHECK(seen.test(v) == !g.nodes[v].is_cti);
  }
}

TEST_CASE("MISO examples and containment") {
  Prog chain = one_block(kChain, "c");
  CiConstraints c;
  c.n_i = 2;
  CHECK(masks(enumerate_miso(chain.g[0], 0, c, kernels())).size() == 6);
  Prog two = one_block("  a = add x y\n", "a");
  c.n_i = 1;
  CHECK(enumerate_miso(two.g[0], 0, c, kernels()).empty());
  std::mt19937 rng(41);
  for (int k = 0; k < 60; ++k) {
    Prog pr = load(oracle::random_dag_iseq(rng, 1 + static_cast<int>(rng() % 12)));
    CiConstraints m;
    m.n_i = 1 + static_cast<int>(rng() % 4);
    std::set<uint32_t> miso = masks(enumerate_miso(pr.g[0], 0, m, kernels()));
    for (const CiCandidate& x : enumerate_maxmiso(pr.g[0], 0, kernels())) {
      if (x.n_in <= m.n_i && x.n_out == 1) CHECK(miso.count(mask_of(x.nodes)));
    }
  }
}

TEST_CASE("extraction does not depend on thread count") {
  Prog x = load(oracle::fixture("xtea.iseq"));
  CiConstraints c;
  c.allow_mem = true;
  auto one = extract_candidates(x.g, c, kernels(), 1);
  auto four = extract_candidates(x.g, c, kernels(), 4);
  CHECK(serialize_candidates(one) == serialize_candidates(four));
  CHECK_FALSE(one.empty());
  NodeSet used;
  for (const CiCandidate& cand : one) {
    if (cand.block != "round") continue;
    CHECK((used & cand.nodes).none());
    used |= cand.nodes;
  }
}

TEST_CASE("candidate files round trip") {
  Prog x = load(oracle::fixture("fsdither2.iseq"));
  auto cands = extract_candidates(x.g, CiConstraints{}, kernels());
  const std::string text = serialize_candidates(cands);
  auto back = parse_candidates(text, x.p, x.g, kernels());
  CHECK(serialize_candidates(back) == text);
  CHECK_THROWS_AS(parse_candidates("cand 0 block fs2 nodes 0,3\n", x.p, x.g, kernels()), ParseError);
  CHECK_THROWS_AS(parse_candidates("cand 0 block zz nodes 0\n", x.p, x.g, kernels()), ParseError);
}

TEST_CASE("pattern dedup") {
  Prog p = load(
      "proc t\nlive c f g h\n"
      "bb b1 freq 1\n  a = add x $1\n  c = add a y\n"
      "bb b2 freq 1\n  d = add u $1\n  f = add d w\n"
      "bb b3 freq 1\n  e = sub u $1\n  g = sub e w\n"
      "bb b4 freq 1\n  k = add u $1\n  h = add w k\n"
      "end\n");
  std::vector<CiCandidate> cs;
  for (int b = 0; b < 4; ++b) {
    cs.push_back(make_candidate(p.g[b], b, set_of({0, 1}), &kernels()));
    cs.back().id = b;
  }
  ClassMap classes = default_class_map();
  auto op = dedup_patterns(cs, p.g, LabelMode::kOpcode, classes);
  CHECK(op.size() == 2);
  auto cl = dedup_patterns(cs, p.g, LabelMode::kResourceClass, classes);
  CHECK(cl.size() == 1);
  CHECK(isomorphic(p.g[0], cs[0].nodes, p.g[3], cs[3].nodes, LabelMode::kOpcode, classes));
  CHECK_FALSE(isomorphic(p.g[0], cs[0].nodes, p.g[2], cs[2].nodes, LabelMode::kOpcode, classes));
}

TEST_CASE("operand order matters for non-commutative ops") {
  Prog p = load(
      "proc t\nlive c f\n"
      "bb b1 freq 1\n  a = add x $1\n  c = sub a y\n"
      "bb b2 freq 1\n  d = add u $1\n  f = sub w d\n"
      "end\n");
  ClassMap classes = default_class_map();
  CHECK_FALSE(isomorphic(p.g[0], set_of({0, 1}), p.g[1], set_of({0, 1}), LabelMode::kOpcode, classes));
}

TEST_CASE("isomorphism is an equivalence on random candidates") {
  std::mt19937 rng(43);
  std::vector<Prog> progs;
  std::vector<std::pair<int, NodeSet>> items;
  for (int k = 0; k < 12; ++k) {
    progs.push_back(load(oracle::random_dag_iseq(rng, 6)));
  }
  for (int k = 0; k < 12; ++k) {
    for (const CiCandidate& c : enumerate_maxmiso(progs[k].g[0], 0, kernels())) items.push_back({k, c.nodes});
  }
  ClassMap classes = default_class_map();
  auto iso = [&](size_t a, size_t b) {
    return isomorphic(progs[items[a].first].g[0], items[a].second, progs[items[b].first].g[0],
                      items[b].second, LabelMode::kResourceClass, classes);
  };
  const size_t n = std::min<size_t>(items.size(), 30);
  for (size_t a = 0; a < n; ++a) {
    CHECK(iso(a, a));
    for (size_t b = 0; b < n; ++b) {
      CHECK(iso(a, b) == iso(b, a));
      for (size_t c = 0; c < n; ++c) {
        if (iso(a, b) && iso(b, c)) CHECK(iso(a, c));
      }
    }
  }
}

TEST_CASE("class maps parse") {
  ClassMap m = parse_class_map("class alu add sub\nclass sh sll\n");
  CHECK(m.at("sub") == "alu");
  CHECK_THROWS_AS(parse_class_map("group x y\n"), ParseError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace byorisc
