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

#ifndef BYORISC_ISOMORPHISM_H_
#define BYORISC_ISOMORPHISM_H_

#include <map>
#include <string>
#include <vector>

#include "byorisc/cigen.h"

namespace byorisc {

enum class LabelMode { kOpcode, kResourceClass };

// opcode -> resource class; opcodes missing from the map are their own class.
using ClassMap = std::map<std::string, std::string>;
ClassMap default_class_map();
ClassMap parse_class_map(const std::string& text, const std::string& source = "<classes>");

struct CiTemplate {
  int id = 0;
  std::vector<int> members;  // indices into the candidate list
};

bool isomorphic(const Dfg& ga, const NodeSet& a, const Dfg& gb, const NodeSet& b, LabelMode mode,
                const ClassMap& classes);

std::vector<CiTemplate> dedup_patterns(const std::vector<CiCandidate>& cands, const std::vector<Dfg>& dfgs,
                                       LabelMode mode, const ClassMap& classes);

}  // namespace byorisc

#endif  // BYORISC_ISOMORPHISM_H_
