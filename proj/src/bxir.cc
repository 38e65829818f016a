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

#include "byorisc/bxir.h"

#include <cmath>
#include <sstream>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {

int BxirOp::lat_milli() const { return static_cast<int>(std::lround(lat * 1000.0)); }

const BxirOp* Bxir::find(const std::string& name) const {
  auto it = ops.find(name);
  return it == ops.end() ? nullptr : &it->second;
}

Bxir parse_bxir(const std::string& text, const std::string& source) {
  Bxir b;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto t = split_ws(strip_comment(raw));
    if (t.empty()) continue;
    auto fail = [&](const std::string& msg) { throw ParseError(source, line, 1, msg); };
    if (t.size() != 12 || t[0] != "op" || t[2] != "in" || t[4] != "out" || t[6] != "area" ||
        t[8] != "lat" || t[10] != "cyc") {
      fail("expected: op <name> in <k> out <k> area <f> lat <f> cyc <n>");
    }
    BxirOp op;
    op.name = t[1];
    op.line = line;
    auto ni = parse_int(t[3]);
    auto no = parse_int(t[5]);
    auto area = parse_double(t[7]);
    auto lat = parse_double(t[9]);
    auto cyc = parse_int(t[11]);
    if (!ni || !no || !area || !lat || !cyc) fail("malformed number");
    op.n_in = static_cast<int>(*ni);
    op.n_out = static_cast<int>(*no);
    op.area = *area;
    op.lat = *lat;
    op.cyc = static_cast<int>(*cyc);
    if (op.n_in < 0 || op.n_out < 0) fail("negative operand count");
    if (op.area < 0) fail("negative area");
    if (op.cyc < 1) fail("cyc must be at least 1");
    if (!(op.lat > 0) || op.lat > op.cyc) fail("lat must satisfy 0 < lat <= cyc");
    const IrOpInfo* ir = find_ir_op(op.name);
    if (!ir) fail("unknown IR opcode '" + op.name + "'");
    if (ir->n_in != op.n_in || ir->n_out != op.n_out) {
      fail("operand counts of '" + op.name + "' do not match the IR (in " + std::to_string(ir->n_in) +
           " out " + std::to_string(ir->n_out) + ")");
    }
    if (b.ops.count(op.name)) fail("duplicate record for '" + op.name + "'");
    if (op.area == 1.0 && op.lat == 1.0 && b.dominant.empty()) b.dominant = op.name;
    b.ops[op.name] = op;
  }
  if (b.dominant.empty()) {
    throw InputError(source + ": no dominant operator (area 1.0, lat 1.0)");
  }
  return b;
}

std::string serialize_bxir(const Bxir& b) {
  std::ostringstream o;
  for (const auto& [name, op] : b.ops) {
    o << "op " << name << " in " << op.n_in << " out " << op.n_out << " area " << op.area << " lat "
      << op.lat << " cyc " << op.cyc << "\n";
  }
  return o.str();
}

void check_bxir_coverage(const CdfgProgram& p, const Bxir& b) {
  for (const BasicBlock& bb : p.blocks) {
    for (const OpNode& op : bb.ops) {
      if (is_ci_opcode_name(op.opcode)) continue;
      if (!b.find(op.opcode)) {
        throw InputError("opcode '" + op.opcode + "' in block '" + bb.label + "' (line " +
                         std::to_string(op.line) + ") has no BXIR record");
      }
    }
  }
}

int op_cycles(const OpNode& op, const Bxir& b, const CiLibrary& cis) {
  if (is_ci_opcode_name(op.opcode)) {
    auto it = cis.find(op.opcode.substr(3));
    if (it == cis.end()) throw InputError("unknown custom instruction '" + op.opcode + "'");
    return it->second.hw_cycles;
  }
  const BxirOp* r = b.find(op.opcode);
  if (!r) throw InputError("opcode '" + op.opcode + "' has no BXIR record");
  return r->cyc;
}

}  // namespace byorisc
