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

#include "byorisc/zolc.h"

#include <set>
#include <sstream>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {

std::optional<uint64_t> trip_count(const ZolcEntry& e) {
  const int64_t d = static_cast<int64_t>(static_cast<int32_t>(e.bound)) -
                    static_cast<int64_t>(static_cast<int32_t>(e.init));
  const int64_t s = static_cast<int32_t>(e.step);
  if (d == 0) return 1;
  if (s == 0 || d % s != 0 || d / s < 0) return std::nullopt;
  return static_cast<uint64_t>(d / s) + 1;
}

void validate_zolc(const ZolcTable& t) {
  std::set<uint32_t> seen;
  std::map<int, uint32_t> ctr_init;
  for (const auto& e : t.entries) {
    if (!seen.insert(e.last_pc).second) {
      throw InputError("duplicate ZOLC entry for last_pc " + std::to_string(e.last_pc));
    }
    if (e.kind != ZolcKind::kBackward) continue;
    if (!trip_count(e)) {
      throw InputError("ZOLC entry at " + std::to_string(e.last_pc) + " has no finite trip count");
    }
    auto [it, fresh] = ctr_init.emplace(e.ctr, e.init);
    if (!fresh && it->second != e.init) {
      throw InputError("ZOLC counter " + std::to_string(e.ctr) + " has conflicting init values");
    }
  }
}

ZolcState initial_zolc_state(const ZolcTable& t) {
  ZolcState s;
  for (const auto& e : t.entries) {
    if (e.kind == ZolcKind::kBackward) s.counters.emplace(e.ctr, e.init);
  }
  return s;
}

std::optional<uint32_t> zolc_step(const ZolcTable& t, ZolcState& s, uint32_t fetched_pc) {
  for (const auto& e : t.entries) {
    if (e.last_pc != fetched_pc) continue;
    if (e.kind == ZolcKind::kForward) return e.cont;
    uint32_t& c = s.counters[e.ctr];
    if (c != e.bound) {
      c += e.step;
      return e.cont;
    }
    c = e.init;
    return e.exit;
  }
  return std::nullopt;
}

ZolcTable parse_zolc(const std::string& text, const std::string& source, const ProgramImage* image) {
  ZolcTable t;
  std::vector<std::string> lines = split(text, '\n');
  for (size_t i = 0; i < lines.size(); ++i) {
    const int line = static_cast<int>(i + 1);
    auto toks = split_ws(strip_comment(lines[i]));
    if (toks.empty()) continue;
    ZolcEntry e;
    if (toks[0] == "backward") {
      e.kind = ZolcKind::kBackward;
    } else if (toks[0] == "forward") {
      e.kind = ZolcKind::kForward;
    } else {
      throw ParseError(source, line, 1, "expected 'backward' or 'forward'");
    }
    std::map<std::string, std::string> kv;
    for (size_t k = 1; k < toks.size(); ++k) {
      size_t eq = toks[k].find('=');
      if (eq == std::string::npos) throw ParseError(source, line, 1, "expected key=value, got '" + toks[k] + "'");
      if (!kv.emplace(toks[k].substr(0, eq), toks[k].substr(eq + 1)).second) {
        throw ParseError(source, line, 1, "repeated key '" + toks[k].substr(0, eq) + "'");
      }
    }
    auto take = [&](const std::string& key, bool is_pc) -> uint32_t {
      auto it = kv.find(key);
      if (it == kv.end()) throw ParseError(source, line, 1, "missing " + key + "=");
      std::string v = it->second;
      kv.erase(it);
      if (auto n = parse_int(v)) return static_cast<uint32_t>(*n);
      if (is_pc && image) {
        auto l = image->labels.find(v);
        if (l != image->labels.end()) return l->second;
      }
      throw ParseError(source, line, 1, "bad value for " + key + ": '" + v + "'");
    };
    e.last_pc = take("last", true);
    e.cont = take("cont", true);
    if (e.kind == ZolcKind::kBackward) {
      e.ctr = static_cast<int>(take("ctr", false));
      e.init = take("init", false);
      e.step = take("step", false);
      e.bound = take("bound", false);
      e.exit = take("exit", true);
    }
    if (!kv.empty()) throw ParseError(source, line, 1, "unknown key '" + kv.begin()->first + "'");
    t.entries.push_back(e);
  }
  try {
    validate_zolc(t);
  } catch (const InputError& err) {
    throw InputError(source + ": " + err.what());
  }
  return t;
}

std::string serialize_zolc(const ZolcTable& t) {
  std::ostringstream o;
  for (const auto& e : t.entries) {
    if (e.kind == ZolcKind::kForward) {
      o << "forward last=" << e.last_pc << " cont=" << e.cont << "\n";
    } else {
      o << "backward last=" << e.last_pc << " ctr=" << e.ctr
        << " init=" << static_cast<int32_t>(e.init) << " step=" << static_cast<int32_t>(e.step)
        << " bound=" << static_cast<int32_t>(e.bound) << " cont=" << e.cont << " exit=" << e.exit
        << "\n";
    }
  }
  return o.str();
}

}  // namespace byorisc
