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

#include <bit>

#include "byorisc/config.h"
#include "byorisc/error.h"
#include "byorisc/hwcost.h"
#include "doctest.h"

namespace byorisc {
namespace {

int clog2(unsigned v) { return static_cast<int>(std::bit_width(v - 1)); }

TEST_SUITE("hwcost") {

TEST_CASE("SID entry width") {
  CHECK(sid_entry_width(8, 8, 256) == 144);
  CHECK(sid_entry_width(2, 2, 16) == 20);
  CHECK(sid_entry_width(1, 1, 16) == 10);
  CHECK_THROWS_AS(sid_entry_width(2, 2, 24), InputError);
}

TEST_CASE("SID LUT sizing") {
  SidLutCost a = sid_lut_cost(256, 8, 8, 256);
  CHECK(a.total_bits == 36864u);
  CHECK(a.block_rams == 2u);
  SidLutCost b = sid_lut_cost(1, 1, 1, 16);
  CHECK(b.total_bits == 10u);
  CHECK(b.block_rams == 1u);
  SidLutCost c = sid_lut_cost(1024, 8, 8, 256);
  CHECK(c.total_bits == 147456u);
  CHECK(c.block_rams == 8u);
  CHECK(sid_lut_cost(256, 8, 8, 256, 16384).block_rams == 3u);
  CHECK_THROWS_AS(sid_lut_cost(0, 1, 1, 16), InputError);
}

TEST_CASE("bypass network examples") {
  SrbCost a = srb_cost(3, 2, 2);
  CHECK(a.mux_count == 3);
  CHECK(a.mux_fanin == 5);
  CHECK(a.comparators == 12);
  CHECK(a.ctrl_bits == 3);
  SrbCost b = srb_cost(2, 1, 2);
  CHECK(b.mux_fanin == 3);
  CHECK(b.comparators == 4);
  CHECK(b.ctrl_bits == 2);
  SrbCost c = srb_cost(8, 8, 2);
  CHECK(c.mux_fanin == 17);
  CHECK(c.comparators == 128);
  CHECK(c.ctrl_bits == 5);
}

TEST_CASE("register file banks") {
  CHECK(mprf_cost(3, 2, 256).banks == 6);
  MprfCost t = mprf_cost(8, 8, 256);
  CHECK(t.banks == 64);
  CHECK(t.regs_per_bank == 32);
  MprfCost d = mprf_cost(2, 1, 256);
  CHECK(d.banks == 2);
  CHECK(d.regs_per_bank == 256);
  CHECK(d.clustered_banks == 2);
  CHECK_THROWS_AS(mprf_cost(2, 3, 256), InputError);
}

TEST_CASE("full parameter grid") {
  for (int rp = 2; rp <= 8; ++rp) {
    for (int wp = 1; wp <= 8; ++wp) {
      for (int np = 1; np <= 4; ++np) {
        SrbCost s = srb_cost(rp, wp, np);
        CHECK(s.mux_count == rp);
        CHECK(s.mux_fanin == np * wp + 1);
        CHECK(s.comparators == rp * np * wp);
        CHECK(s.ctrl_bits == clog2(wp) + clog2(np + 1));
      }
      for (unsigned nr : {16u, 32u, 64u, 128u, 256u}) {
        if (nr % wp == 0) {
          MprfCost m = mprf_cost(rp, wp, nr);
          CHECK(m.banks == rp * wp);
          CHECK(m.regs_per_bank == static_cast<int>(nr) / wp);
        } else {
          CHECK_THROWS_AS(mprf_cost(rp, wp, nr), InputError);
        }
      }
    }
  }
}

TEST_CASE("entry width is monotone") {
  for (int ni = 1; ni <= 8; ++ni) {
    for (int no = 1; no <= 8; ++no) {
      for (unsigned nr = 16; nr <= 256; nr *= 2) {
        const int w = sid_entry_width(ni, no, nr);
        CHECK(w == (ni + no) * (clog2(nr) + 1));
        if (ni < 8) CHECK(sid_entry_width(ni + 1, no, nr) >= w);
        if (no < 8) CHECK(sid_entry_width(ni, no + 1, nr) >= w);
        if (nr < 256) CHECK(sid_entry_width(ni, no, nr * 2) >= w);
      }
    }
  }
}

TEST_CASE("machine report") {
  CostReport t = cost_report(testbed_config());
  CHECK(t.sid_entry_bits == 144);
  CHECK(t.sid_block_rams_18k == 2u);
  CHECK(t.mprf_banks == 64);
  CostReport base = cost_report(MachineConfig{});
  CHECK(base.sid_total_bits == 0u);
  CHECK(base.mprf_banks == 2);
  CHECK(format_cost_text(t).find("sid_entry_bits") != std::string::npos);
  CHECK(format_cost_csv(t).find("144") != std::string::npos);
}

}  // TEST_SUITE

}  // namespace
}  // namespace byorisc
