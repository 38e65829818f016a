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

#include "byorisc/config.h"
#include "byorisc/error.h"
#include "byorisc/isa.h"
#include "doctest.h"

namespace byorisc {
namespace {

using M = Mnemonic;

MachineConfig all_options() {
  MachineConfig c = testbed_config();
  c.have_small_imm = true;
  return c;
}

TEST_SUITE("isa") {

TEST_CASE("encode places fields on byte boundaries") {
  MachineConfig cfg = all_options();
  CHECK(encode(make_rrr(M::kAdd, 3, 1, 2), cfg) == 0x04010203u);
  CHECK(encode(make_imm16(M::kLli, 5, 0xBEEF), cfg) == 0x1005BEEFu);
  CHECK(encode(make_ci(0x40, 7), cfg) == 0x40070000u);
}

TEST_CASE("decode inverts the encode examples") {
  MachineConfig cfg = all_options();
  auto ci = decode(0x40070000u, cfg);
  REQUIRE(ci);
  CHECK(ci->mnemonic == M::kCi);
  CHECK(ci->ciocc == 7);
  MachineConfig base;
  CHECK_FALSE(decode(0x40070000u, base));
  CHECK_FALSE(decode(0xFF000000u, base));
  auto add = decode(0x04010203u, base);
  REQUIRE(add);
  CHECK(*add == make_rrr(M::kAdd, 3, 1, 2));
}

TEST_CASE("unused fields must be zero") {
  MachineConfig cfg = all_options();
  // lw uses rs and rd only; a set rt byte is illegal.
  CHECK_FALSE(decode(0x20010203u, cfg));
  CHECK(decode(0x20010003u, cfg));
  // shamt occupies the low five bits of its byte.
  CHECK_FALSE(decode(0x13012003u, cfg));
}

TEST_CASE("minimal set is always supported") {
  MachineConfig none;
  int minimal = 0;
  for (const OpcodeInfo& e : opcode_table()) {
    if (!e.minimal) continue;
    ++minimal;
    CHECK_MESSAGE(is_supported(e.mnemonic, none), e.name);
  }
  CHECK(minimal == 22);
  CHECK(is_supported(M::kSltu, none));
  CHECK_FALSE(is_supported(M::kMul, none));
  MachineConfig mul;
  mul.opt_mul = true;
  CHECK(is_supported(M::kMul, mul));
}

TEST_CASE("optional groups follow their flags") {
  MachineConfig c;
  CHECK_FALSE(is_supported(M::kLb, c));
  CHECK_FALSE(is_supported(M::kSra, c));
  CHECK_FALSE(is_supported(M::kSeq, c));
  CHECK_FALSE(is_supported(M::kNor, c));
  CHECK_FALSE(is_supported(M::kCvt, c));
  CHECK_FALSE(is_supported(M::kJal, c));
  CHECK_FALSE(is_supported(M::kAddi, c));
  c.opt_ls = c.opt_shift = c.opt_set = c.opt_logic = c.opt_cvt = c.opt_cti = c.have_small_imm = true;
  for (M m : {M::kLb, M::kSra, M::kSeq, M::kNor, M::kCvt, M::kJal, M::kAddi}) CHECK(is_supported(m, c));
  CHECK_THROWS_AS(encode(make_rrr(M::kMul, 1, 2, 3), MachineConfig{}), InputError);
}

TEST_CASE("operands that do not fit are rejected") {
  MachineConfig small;
  small.raw = 4;
  CHECK_THROWS_AS(encode(make_rrr(M::kAdd, 16, 1, 2), small), InputError);
  CHECK_NOTHROW(encode(make_rrr(M::kAdd, 15, 1, 2), small));
  CHECK_THROWS_AS(encode(make_rr_imm(M::kSll, 1, 2, 32), all_options()), InputError);
}

TEST_CASE("opcode budget") {
  int base = 0;
  for (const OpcodeInfo& e : opcode_table()) {
    if (e.mnemonic == M::kCi) continue;
    ++base;
    CHECK(e.opcode < 0x40);
    CHECK_FALSE(is_ci_opcode(e.opcode));
  }
  CHECK(base <= 64);
  int ci = 0;
  for (int op = 0; op < 256; ++op) ci += is_ci_opcode(static_cast<uint8_t>(op));
  CHECK(ci == 192);
}

TEST_CASE("every mnemonic has one table row") {
  for (const OpcodeInfo& e : opcode_table()) {
    CHECK(&info(e.mnemonic) == &e);
    CHECK(find_mnemonic(e.name) == &e);
  }
}

TEST_CASE("round trip over random instructions and configs") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 4000; ++trial) {
    MachineConfig cfg;
    cfg.raw = 4 + static_cast<int>(rng() % 5);
    cfg.opt_ls = rng() & 1;
    cfg.opt_shift = rng() & 1;
    cfg.opt_cti = rng() & 1;
    cfg.opt_cvt = rng() & 1;
    cfg.opt_mul = rng() & 1;
    cfg.opt_div = rng() & 1;
    cfg.opt_set = rng() & 1;
    cfg.opt_logic = rng() & 1;
    cfg.have_small_imm = rng() & 1;
    cfg.have_ci = rng() & 1;
    const auto table = opcode_table();
    const OpcodeInfo& e = table[rng() % table.size()];
    if (!is_supported(e.mnemonic, cfg)) continue;
    const int nr = 1 << cfg.raw;
    auto reg = [&] { return static_cast<int>(rng() % nr); };
    Instruction in;
    switch (e.shape) {
      case Shape::kNone: in = make_halt(); in.mnemonic = e.mnemonic; in.opcode = e.opcode; break;
      case Shape::kRRR: in = make_rrr(e.mnemonic, reg(), reg(), reg()); break;
      case Shape::kRRImm8: in = make_rr_imm(e.mnemonic, reg(), reg(), rng() % 256); break;
      case Shape::kRRShamt: in = make_rr_imm(e.mnemonic, reg(), reg(), rng() % 32); break;
      case Shape::kRImm16: in = make_imm16(e.mnemonic, reg(), rng() & 0xFFFF); break;
      case Shape::kLoad: in = make_load(e.mnemonic, reg(), reg()); break;
      case Shape::kStore: in = make_store(e.mnemonic, reg(), reg()); break;
      case Shape::kBranch: in = make_branch(e.mnemonic, reg(), static_cast<int16_t>(rng())); break;
      case Shape::kJump: in = make_jump(e.mnemonic, rng() & 0xFFFFFF); break;
      case Shape::kJumpReg: in = make_jr(reg()); break;
      case Shape::kCvt:
        in = make_cvt(reg(), reg(), CvtSpec{(rng() & 1) != 0, static_cast<uint8_t>(rng() % 3),
                                            static_cast<uint8_t>(rng() % 3)});
        break;
      case Shape::kCop: continue;
      case Shape::kCi: in = make_ci(static_cast<uint8_t>(0x40 + rng() % 192), rng() % 256); break;
    }
    const uint32_t w = encode(in, cfg);
    auto back = decode(w, cfg);
    REQUIRE_MESSAGE(back, e.name);
    CHECK_MESSAGE(*back == in, e.name);
    CHECK(encode(*back, cfg) == w);
  }
}

TEST_CASE("coprocessor encodings decode but are not supported") {
  MachineConfig c;
  CHECK(is_encodable(M::kMfcx, c));
  CHECK_FALSE(is_supported(M::kMfcx, c));
}

TEST_CASE("dump table lists every row") {
  std::string t = dump_opcode_table(testbed_config());
  for (const OpcodeInfo& e : opcode_table()) CHECK(t.find(std::string(e.name)) != std::string::npos);
  CHECK(t.find("CI opcodes available: 192") != std::string::npos);
}

}  // TEST_SUITE

TEST_SUITE("config") {

TEST_CASE("defaults and testbed") {
  MachineConfig d = validate_config({});
  CHECK(d.raw == 8);
  CHECK(d.nrp == 2);
  CHECK(d.nwp == 1);
  CHECK(d.forwarding);
  CHECK(d.n_pipe == 2);
  CHECK(d.pipeline_stages() == 5);
  MachineConfig t = validate_config({{"raw", "8"}, {"nrp", "8"}, {"nwp", "8"}, {"HAVE_CI", "1"},
                                     {"n_ci_inputs", "8"}, {"n_ci_outputs", "8"}});
  CHECK(t.have_ci);
  CHECK(t.pipeline_stages() == 6);
  CHECK(testbed_config().num_registers() == 256);
}

TEST_CASE("ranges are enforced") {
  CHECK_THROWS_AS(validate_config({{"nrp", "1"}}), InputError);
  CHECK_THROWS_AS(validate_config({{"nrp", "9"}}), InputError);
  CHECK_THROWS_AS(validate_config({{"nwp", "0"}}), InputError);
  CHECK_THROWS_AS(validate_config({{"raw", "3"}}), InputError);
  CHECK_THROWS_AS(validate_config({{"raw", "9"}}), InputError);
  CHECK_THROWS_AS(validate_config({{"bogus", "1"}}), InputError);
  CHECK_THROWS_AS(validate_config({{"n_ci_inputs", "2"}}), InputError);
  CHECK_THROWS_AS(validate_config({{"HAVE_COP", "1"}}), InputError);
  CHECK_THROWS_AS(validate_config({{"IMEMSIZE", "1000"}}), InputError);
}

TEST_CASE("text form round trips") {
  MachineConfig t = testbed_config();
  CHECK(validate_config(parse_config_text(config_to_text(t))) == t);
  MachineConfig d;
  CHECK(validate_config(parse_config_text(config_to_text(d))) == d);
}

}  // TEST_SUITE

}  // namespace
}  // namespace byorisc
