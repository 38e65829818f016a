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

#ifndef BYORISC_CIGEN_H_
#define BYORISC_CIGEN_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "byorisc/bxir.h"
#include "byorisc/dfg.h"

namespace byorisc {

struct CiConstraints {
  int n_i = 8;
  int n_o = 8;
  bool allow_mem = false;
  std::set<std::string> forbidden_opcodes;
  int max_nodes = 0;       // 0: no cap
  NodeSet excluded;        // nodes already taken by earlier candidates
  uint64_t visit_budget = 0;  // 0: unlimited
};

struct CiCandidate {
  int id = 0;
  std::string block;
  int block_index = 0;
  uint64_t freq = 0;
  NodeSet nodes;
  int n_in = 0;
  int n_out = 0;
  int n_const = 0;
  int sw = 0;
  int hw = 0;
  uint64_t gain = 0;
  double area = 0.0;

  std::vector<int> node_ids() const;
  int size() const { return static_cast<int>(nodes.count()); }
};

bool eligible_node(const Dfg& g, int v, const CiConstraints& c);

// Builds a candidate with its I/O signature and, given a BXIR, its estimates.
CiCandidate make_candidate(const Dfg& g, int block_index, const NodeSet& s, const Bxir* bxir);

// Strict order used to pick the best candidate: higher gain, then fewer
// nodes, then lexicographically smaller node ids.
bool better_candidate(const CiCandidate& a, const CiCandidate& b);

struct MimoResult {
  std::vector<CiCandidate> candidates;
  std::optional<CiCandidate> best;
  uint64_t visits = 0;
  bool truncated = false;
};

MimoResult enumerate_mimo(const Dfg& g, int block_index, const CiConstraints& c, const Bxir& bxir,
                          bool prune);
std::vector<CiCandidate> enumerate_miso(const Dfg& g, int block_index, const CiConstraints& c,
                                        const Bxir& bxir);
std::vector<CiCandidate> enumerate_maxmiso(const Dfg& g, int block_index, const Bxir& bxir,
                                           const CiConstraints* c = nullptr);

// Repeatedly extracts the best pruned-MIMO candidate of every block until no
// candidate with positive gain remains. Blocks are searched by up to jobs
// threads; the result does not depend on jobs.
std::vector<CiCandidate> extract_candidates(const std::vector<Dfg>& dfgs, const CiConstraints& c,
                                            const Bxir& bxir, int jobs = 1);

// One line per candidate:
//   cand <id> block <label> nodes <i,j,...> io <n_in>,<n_out>,<n_const> sw .. hw .. gain .. area ..
std::string serialize_candidates(const std::vector<CiCandidate>& cands);
// Only the block and node list are read back; the rest is recomputed.
std::vector<CiCandidate> parse_candidates(const std::string& text, const CdfgProgram& p,
                                          const std::vector<Dfg>& dfgs, const Bxir& bxir,
                                          const std::string& source = "<candidates>");

}  // namespace byorisc

#endif  // BYORISC_CIGEN_H_
