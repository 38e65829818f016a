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

#ifndef BYORISC_BXIR_H_
#define BYORISC_BXIR_H_

#include <map>
#include <string>

#include "byorisc/iseq.h"

namespace byorisc {

struct BxirOp {
  std::string name;
  int n_in = 0;
  int n_out = 0;
  double area = 0.0;  // MAU
  double lat = 1.0;   // fraction of a clock period
  int cyc = 1;
  int line = 0;

  // Latency in thousandths of a period, used by the chaining scheduler.
  int lat_milli() const;
};

struct Bxir {
  std::map<std::string, BxirOp> ops;
  std::string dominant;

  const BxirOp* find(const std::string& name) const;
};

// Format: one "op <name> in <k> out <k> area <f> lat <f> cyc <n>" per line.
Bxir parse_bxir(const std::string& text, const std::string& source = "<bxir>");
std::string serialize_bxir(const Bxir& b);

// Throws InputError naming the first opcode without a BXIR record and the
// block it appears in. CI ops are costed from their behavior instead.
void check_bxir_coverage(const CdfgProgram& p, const Bxir& b);

// Sequential cycles of one op. CI ops take their behavior hw_cycles.
int op_cycles(const OpNode& op, const Bxir& b, const CiLibrary& cis);

}  // namespace byorisc

#endif  // BYORISC_BXIR_H_
