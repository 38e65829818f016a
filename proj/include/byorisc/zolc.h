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

#ifndef BYORISC_ZOLC_H_
#define BYORISC_ZOLC_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "byorisc/image.h"

namespace byorisc {

enum class ZolcKind { kBackward, kForward };

// One task-switch record, keyed by the PC of the last instruction of a
// data-processing task.
struct ZolcEntry {
  uint32_t last_pc = 0;
  ZolcKind kind = ZolcKind::kBackward;
  int ctr = 0;  // counter id
  uint32_t init = 0;
  uint32_t step = 1;
  uint32_t bound = 0;
  uint32_t cont = 0;  // backward: loop start; forward: target
  uint32_t exit = 0;  // backward only
};

struct ZolcTable {
  std::vector<ZolcEntry> entries;
};

// Programmer-invisible loop counters.
struct ZolcState {
  std::map<int, uint32_t> counters;
  bool operator==(const ZolcState&) const = default;
};

// Number of loop iterations of a backward entry, or nullopt if the counter
// never reaches its bound exactly.
std::optional<uint64_t> trip_count(const ZolcEntry& e);

// Throws InputError on duplicate last_pc or an infinite backward entry.
void validate_zolc(const ZolcTable& t);
ZolcState initial_zolc_state(const ZolcTable& t);

// Called for every fetched PC. Backward entries compare the counter with the
// bound: unequal advances the counter and continues, equal reloads init and
// exits. Forward entries always redirect to cont.
std::optional<uint32_t> zolc_step(const ZolcTable& t, ZolcState& s, uint32_t fetched_pc);

// One entry per line:
//   backward last=<pc> ctr=<id> init=<v> step=<v> bound=<v> cont=<pc> exit=<pc>
//   forward  last=<pc> cont=<pc>
// PCs may be word addresses or labels of image.
ZolcTable parse_zolc(const std::string& text, const std::string& source = "<zolc>",
                     const ProgramImage* image = nullptr);
std::string serialize_zolc(const ZolcTable& t);

}  // namespace byorisc

#endif  // BYORISC_ZOLC_H_
