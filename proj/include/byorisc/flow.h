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

#ifndef BYORISC_FLOW_H_
#define BYORISC_FLOW_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "byorisc/cisel.h"
#include "byorisc/hwcost.h"
#include "byorisc/isomorphism.h"
#include "byorisc/iss.h"
#include "byorisc/lower.h"
#include "byorisc/pipeline.h"

namespace byorisc {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
  std::string command;
  std::string config_path;
  std::vector<std::pair<std::string, uint64_t>> inputs;  // path, FNV-1a digest
  uint64_t seed = 0;
  std::optional<int64_t> timestamp;  // from SOURCE_DATE_EPOCH when set
  uint64_t output_digest = 0;

  void add_input(const std::string& path, const std::string& content);
  std::string text(const std::string& prefix = "") const;
};
RunManifest make_manifest(const std::string& command, uint64_t seed);

struct DseOptions {
  CiConstraints constraints;
  double budget = 1e9;
  std::string method = "greedy";
  LabelMode label_mode = LabelMode::kOpcode;
  int jobs = 1;
};

struct DseBundle {
  CdfgProgram original;
  CdfgProgram rewritten;
  std::vector<Dfg> dfgs;
  std::vector<CiCandidate> candidates;
  std::vector<CiTemplate> templates;
  SelectionReport report;
  LoweredProgram original_asm;
  LoweredProgram rewritten_asm;
  std::string ci_directives;
  std::map<std::string, std::string> dot_files;
  CostReport cost;
};

DseBundle cmd_dse(const CdfgProgram& prog, const Bxir& bxir, const MachineConfig& cfg,
                  const DseOptions& opts);
// Writes every artifact of the bundle under dir and returns the file names.
std::vector<std::string> write_bundle(const DseBundle& b, const std::string& dir, RunManifest manifest);

struct ProgramInput {
  enum class Kind { kIseq, kAsm };
  Kind kind = Kind::kIseq;
  std::string text;
  std::string name;
  CiLibrary cilib;  // extra behaviors for assembly inputs
};

struct SimPair {
  IssResult iss;
  SimResult pipe;
  uint64_t cycles() const { return pipe.cycles; }
};

struct VerifyResult {
  bool pass = false;
  std::string report;
  SimPair original;
  SimPair rewritten;
  double simulated_speedup = 1.0;
};

VerifyResult cmd_verify(const ProgramInput& original, const ProgramInput& rewritten, const MachineConfig& cfg,
                        uint64_t max_cycles = 50'000'000);

}  // namespace byorisc

#endif  // BYORISC_FLOW_H_
