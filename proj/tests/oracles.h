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

// Reference implementations and generators shared by the unit tests and the
// acceptance runner. Nothing here calls into the library code it checks.

#ifndef BYORISC_TESTS_ORACLES_H_
#define BYORISC_TESTS_ORACLES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "byorisc/cigen.h"
#include "byorisc/config.h"
#include "byorisc/image.h"
#include "byorisc/iseq.h"

namespace byorisc::oracle {

std::string fixture_path(const std::string& name);
std::string fixture(const std::string& name);

// A single-block ISeq procedure with n value-producing ops over live-ins
// x0..x3, unique value names v0.., optional trailing branch and a random
// live set.
std::string random_dag_iseq(std::mt19937& rng, int n);

// Subset of one block's ops as a bit mask (block has at most 31 ops).
struct SubsetInfo {
  uint32_t mask = 0;
  int n_in = 0;
  int n_out = 0;
  int n_const = 0;
  bool operator<(const SubsetInfo& o) const { return mask < o.mask; }
  bool operator==(const SubsetInfo& o) const = default;
};

// Every non-empty subset of eligible ops that is convex and meets the port
// bounds. Def-use, reachability and operand counts are derived straight from
// the op list. Eligible: not a branch or jump, not a memory op unless
// allow_mem, not forbidden.
std::vector<SubsetInfo> brute_force_subsets(const CdfgProgram& p, int block, const CiConstraints& c);

// Exhaustive 0-1 selection: maximal total gain over subsets that are
// node-disjoint per block, acyclic after contraction, and within budget
// (areas compared in hundredths).
uint64_t exhaustive_selection(const std::vector<CiCandidate>& cands, const CdfgProgram& p,
                              int budget_centi);

// Random terminating program over the non-CI instruction set enabled in
// cfg. Registers r1..r3 hold aligned data addresses and are never written
// after the prologue. Control transfers only jump forward.
ProgramImage random_program(std::mt19937& rng, const MachineConfig& cfg, int length);

// Straight-line register-only ALU program (no loads, branches, multiply or
// divide) ending in halt.
ProgramImage random_alu_program(std::mt19937& rng, const MachineConfig& cfg, int length);

}  // namespace byorisc::oracle

#endif  // BYORISC_TESTS_ORACLES_H_
