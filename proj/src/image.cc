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

#include "byorisc/image.h"

#include <sstream>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {
namespace {

class BitWriter {
 public:
  void put(uint32_t v, int n) {
    for (int i = n - 1; i >= 0; --i) bits_.push_back((v >> i) & 1);
  }
  std::string hex_string() const {
    std::vector<bool> b = bits_;
    while (b.size() % 4 != 0) b.insert(b.begin(), false);
    std::string out;
    for (size_t i = 0; i < b.size(); i += 4) {
      int d = b[i] << 3 | b[i + 1] << 2 | b[i + 2] << 1 | b[i + 3];
      out.push_back("0123456789abcdef"[d]);
    }
    return out;
  }

 private:
  std::vector<bool> bits_;
};

class BitReader {
 public:
  BitReader(const std::string& hex_bits, int total) {
    std::vector<bool> b;
    for (char c : hex_bits) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw InputError("bad hex digit in SID entry");
      for (int i = 3; i >= 0; --i) b.push_back((d >> i) & 1);
    }
    if (static_cast<int>(b.size()) < total) throw InputError("SID entry too short");
    size_t excess = b.size() - total;
    for (size_t i = 0; i < excess; ++i) {
      if (b[i]) throw InputError("SID entry wider than its geometry");
    }
    bits_.assign(b.begin() + excess, b.end());
  }
  uint32_t get(int n) {
    uint32_t v = 0;
    for (int i = 0; i < n; ++i) v = v << 1 | bits_.at(pos_++);
    return v;
  }

 private:
  std::vector<bool> bits_;
  size_t pos_ = 0;
};

}  // namespace

int sid_entry_bits(int n_i, int n_o, int raw) { return (n_i + n_o) * (raw + 1); }

std::string pack_sid_entry(const SidEntry& e, int n_i, int n_o, int raw) {
  if (static_cast<int>(e.dst.size()) > n_o || static_cast<int>(e.src.size()) > n_i) {
    throw InputError("SID entry exceeds the CI operand bounds");
  }
  BitWriter w;
  for (int k = 0; k < n_o; ++k) w.put(k < static_cast<int>(e.dst.size()), 1);
  for (int k = 0; k < n_o; ++k) w.put(k < static_cast<int>(e.dst.size()) ? e.dst[k] : 0, raw);
  for (int k = 0; k < n_i; ++k) w.put(k < static_cast<int>(e.src.size()), 1);
  for (int k = 0; k < n_i; ++k) w.put(k < static_cast<int>(e.src.size()) ? e.src[k] : 0, raw);
  return w.hex_string();
}

SidEntry unpack_sid_entry(const std::string& hex_bits, int n_i, int n_o, int raw) {
  BitReader r(hex_bits, sid_entry_bits(n_i, n_o, raw));
  std::vector<bool> we(n_o), re(n_i);
  std::vector<uint8_t> dst(n_o), src(n_i);
  for (int k = 0; k < n_o; ++k) we[k] = r.get(1);
  for (int k = 0; k < n_o; ++k) dst[k] = static_cast<uint8_t>(r.get(raw));
  for (int k = 0; k < n_i; ++k) re[k] = r.get(1);
  for (int k = 0; k < n_i; ++k) src[k] = static_cast<uint8_t>(r.get(raw));
  SidEntry e;
  for (int k = 0; k < n_o; ++k) {
    if (we[k]) e.dst.push_back(dst[k]);
  }
  for (int k = 0; k < n_i; ++k) {
    if (re[k]) e.src.push_back(src[k]);
  }
  return e;
}

std::string serialize_image(const ProgramImage& img) {
  std::ostringstream o;
  o << "BYORISC1\n";
  o << "code " << img.code.size() << "\n";
  for (uint32_t w : img.code) o << hex(w, 8) << "\n";
  o << "sid " << img.sid_table.size() << " ni " << img.sid_ni << " no " << img.sid_no
    << " raw " << img.sid_raw << "\n";
  for (const auto& [occ, e] : img.sid_table) {
    o << hex(occ, 2) << " " << pack_sid_entry(e, img.sid_ni, img.sid_no, img.sid_raw) << "\n";
  }
  o << "ci " << img.ci_bindings.size() << "\n";
  for (const auto& [opc, name] : img.ci_bindings) o << hex(opc, 2) << " " << name << "\n";

  // Contiguous byte runs, at most 16 per line.
  std::vector<std::pair<uint32_t, std::string>> runs;
  uint32_t next = 0;
  for (const auto& [addr, b] : img.data_init) {
    if (runs.empty() || addr != next || runs.back().second.size() >= 32) {
      runs.emplace_back(addr, "");
    }
    runs.back().second += to_lower(hex(b, 2));
    next = addr + 1;
  }
  o << "data " << runs.size() << "\n";
  for (const auto& [addr, bytes] : runs) o << hex(addr, 8) << " " << bytes << "\n";
  o << "label " << img.labels.size() << "\n";
  for (const auto& [name, addr] : img.labels) o << hex(addr, 8) << " " << name << "\n";
  return o.str();
}

ProgramImage parse_image(const std::string& text, const std::string& source) {
  std::vector<std::string> lines = split(text, '\n');
  size_t li = 0;
  auto next_line = [&]() -> std::vector<std::string> {
    while (li < lines.size()) {
      std::string t(trim(lines[li++]));
      if (!t.empty()) return split_ws(t);
    }
    throw ParseError(source, static_cast<int>(li), 1, "unexpected end of image");
  };
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(source, static_cast<int>(li), 1, msg);
  };
  auto header = [&](const std::string& name, size_t min_fields) {
    auto f = next_line();
    if (f.empty() || f[0] != name || f.size() < min_fields) {
      throw fail("expected section '" + name + "'");
    }
    return f;
  };
  auto count_of = [&](const std::string& s) {
    int64_t n = require_int(s, "section size");
    if (n < 0) throw fail("negative section size");
    return static_cast<size_t>(n);
  };

  ProgramImage img;
  try {
    auto magic = next_line();
    if (magic.size() != 1 || magic[0] != "BYORISC1") throw fail("missing BYORISC1 header");

    auto f = header("code", 2);
    for (size_t n = count_of(f[1]), i = 0; i < n; ++i) {
      auto w = next_line();
      img.code.push_back(static_cast<uint32_t>(require_hex(w.at(0), "code word")));
    }
    f = header("sid", 8);
    if (f[2] != "ni" || f[4] != "no" || f[6] != "raw") throw fail("malformed sid header");
    img.sid_ni = static_cast<int>(require_int(f[3], "sid geometry"));
    img.sid_no = static_cast<int>(require_int(f[5], "sid geometry"));
    img.sid_raw = static_cast<int>(require_int(f[7], "sid geometry"));
    for (size_t n = count_of(f[1]), i = 0; i < n; ++i) {
      auto w = next_line();
      if (w.size() != 2) throw fail("malformed sid line");
      auto occ = static_cast<uint8_t>(require_hex(w[0], "hex field"));
      img.sid_table[occ] = unpack_sid_entry(w[1], img.sid_ni, img.sid_no, img.sid_raw);
    }
    f = header("ci", 2);
    for (size_t n = count_of(f[1]), i = 0; i < n; ++i) {
      auto w = next_line();
      if (w.size() != 2) throw fail("malformed ci line");
      img.ci_bindings[static_cast<uint8_t>(require_hex(w[0], "hex field"))] = w[1];
    }
    f = header("data", 2);
    for (size_t n = count_of(f[1]), i = 0; i < n; ++i) {
      auto w = next_line();
      if (w.size() != 2 || w[1].size() % 2 != 0) throw fail("malformed data line");
      auto addr = static_cast<uint32_t>(require_hex(w[0], "hex field"));
      for (size_t k = 0; k < w[1].size(); k += 2) {
        img.data_init[addr + static_cast<uint32_t>(k / 2)] =
            static_cast<uint8_t>(require_hex(w[1].substr(k, 2), "data byte"));
      }
    }
    f = header("label", 2);
    for (size_t n = count_of(f[1]), i = 0; i < n; ++i) {
      auto w = next_line();
      if (w.size() != 2) throw fail("malformed label line");
      img.labels[w[1]] = static_cast<uint32_t>(require_hex(w[0], "hex field"));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw fail(e.what());
  }
  return img;
}

}  // namespace byorisc
