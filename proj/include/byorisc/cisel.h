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

#ifndef BYORISC_CISEL_H_
#define BYORISC_CISEL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "byorisc/cigen.h"
#include "byorisc/config.h"

namespace byorisc {

int sw_cycles(const Dfg& g, const NodeSet& s, const Bxir& bxir);

struct HwSchedule {
  int cycles = 0;
  std::vector<int> start;   // per node, thousandths of a period, -1 outside
  std::vector<int> finish;
  std::string mem_states;   // one char per cycle: '-', 'L' or 'S'
};

// Chained ASAP schedule. Dependent single-cycle ops share a period while
// their accumulated latency fits; multi-cycle and memory ops start on a
// period boundary and take whole periods; one memory transfer per period.
HwSchedule hw_schedule(const Dfg& g, const NodeSet& s, const Bxir& bxir);
int hw_cycles(const Dfg& g, const NodeSet& s, const Bxir& bxir);
uint64_t cycle_gain(uint64_t freq, int sw, int hw);
double ci_area(const Dfg& g, const NodeSet& s, const Bxir& bxir);
int area_units(double area);  // centi-MAU

struct SelectedCi {
  CiCandidate cand;
  std::string name;
  int template_id = -1;
  double incr_speedup = 1.0;
};

struct SelectionReport {
  std::string method;
  double budget = 0.0;
  std::vector<SelectedCi> chosen;
  double total_area = 0.0;
  double template_area = 0.0;  // area with one unit per distinct template
  uint64_t total_gain = 0;
  uint64_t base_cycles = 0;
  uint64_t new_cycles = 0;
  double speedup = 1.0;
};

// Candidates of one block must be node-disjoint and stay acyclic when each
// is contracted to a single node.
bool compatible(const std::vector<const CiCandidate*>& cands, const std::vector<Dfg>& dfgs);

SelectionReport select_greedy(const std::vector<CiCandidate>& cands, const std::vector<Dfg>& dfgs,
                              double budget);
SelectionReport select_knapsack(const std::vector<CiCandidate>& cands, const std::vector<Dfg>& dfgs,
                                double budget);

uint64_t base_cycles(const CdfgProgram& p, const Bxir& bxir);
// Fills base/new cycles, speedup and the cumulative speedup after each CI.
void estimate_speedup(SelectionReport& r, uint64_t base);
void estimate_speedup(const CdfgProgram& p, SelectionReport& r, const Bxir& bxir);
double speedup_of(uint64_t base, uint64_t gain);
double percent_diff(double estimated, double simulated);

std::string format_report_csv(const SelectionReport& r);
std::string format_report_markdown(const SelectionReport& r);

struct MappedProgram {
  CdfgProgram program;
  std::vector<std::string> names;  // CI name of each chosen candidate
};

// Replaces every chosen candidate by one ci op. Candidates with identical
// behavior share a CI. The new behaviors are added to program.cis.
MappedProgram map_cis(const CdfgProgram& p, const std::vector<Dfg>& dfgs, SelectionReport& r,
                      const Bxir& bxir, const MachineConfig* cfg = nullptr);

}  // namespace byorisc

#endif  // BYORISC_CISEL_H_
