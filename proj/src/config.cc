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

#include "byorisc/config.h"

#include <functional>
#include <sstream>

#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {
namespace {

bool parse_flag(const std::string& key, const std::string& value) {
  std::string v = to_lower(value);
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw InputError("config key " + key + ": expected a flag, got '" + value + "'");
}

int64_t parse_number(const std::string& key, const std::string& value) {
  std::string v = to_upper(trim(value));
  int64_t scale = 1;
  if (!v.empty() && (v.back() == 'K' || v.back() == 'M')) {
    scale = v.back() == 'K' ? 1024 : 1024 * 1024;
    v.pop_back();
    if (!v.empty() && v.back() == 'B') v.pop_back();
  } else if (v.size() > 2 && v.ends_with("KB")) {
    scale = 1024;
    v.resize(v.size() - 2);
  }
  auto n = parse_int(to_lower(v));
  if (!n) throw InputError("config key " + key + ": expected an integer, got '" + value + "'");
  return *n * scale;
}

void check_range(const std::string& key, int64_t v, int64_t lo, int64_t hi) {
  if (v < lo || v > hi) {
    throw InputError("config key " + key + " = " + std::to_string(v) +
                     " out of range [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  }
}

bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Maps lower/upper-case spellings onto one canonical upper-case name.
std::string canonical_key(const std::string& key) {
  std::string k = to_upper(trim(key));
  if (k == "IMEM_SIZE") return "IMEMSIZE";
  if (k == "DMEM_SIZE") return "DMEMSIZE";
  if (k == "NPIPE") return "N_PIPE";
  return k;
}

}  // namespace

MachineConfig validate_config(const RawConfig& raw_config) {
  MachineConfig cfg;
  bool ci_in_set = false;
  bool ci_out_set = false;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto flag = [](bool MachineConfig::*field, MachineConfig& c) {
    return [field, &c](const std::string& k, const std::string& v) {
      c.*field = parse_flag(k, v);
    };
  };
  const std::map<std::string, Setter> setters = {
      {"HAVE_CI", flag(&MachineConfig::have_ci, cfg)},
      {"HAVE_ZOLC", flag(&MachineConfig::have_zolc, cfg)},
      {"HAVE_SMALL_IMM", flag(&MachineConfig::have_small_imm, cfg)},
      {"HAVE_COP", flag(&MachineConfig::have_cop, cfg)},
      {"FORWARDING", flag(&MachineConfig::forwarding, cfg)},
      {"BR_EARLY", flag(&MachineConfig::br_early, cfg)},
      {"OPT_LS", flag(&MachineConfig::opt_ls, cfg)},
      {"OPT_SHIFT", flag(&MachineConfig::opt_shift, cfg)},
      {"OPT_CTI", flag(&MachineConfig::opt_cti, cfg)},
      {"OPT_CVT", flag(&MachineConfig::opt_cvt, cfg)},
      {"OPT_MUL", flag(&MachineConfig::opt_mul, cfg)},
      {"OPT_DIV", flag(&MachineConfig::opt_div, cfg)},
      {"OPT_SET", flag(&MachineConfig::opt_set, cfg)},
      {"OPT_LOGIC", flag(&MachineConfig::opt_logic, cfg)},
      {"IMEMSIZE",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 4, int64_t{1} << 26);
         cfg.imem_size = static_cast<uint32_t>(n);
       }},
      {"DMEMSIZE",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 4, int64_t{1} << 26);
         cfg.dmem_size = static_cast<uint32_t>(n);
       }},
      {"OW",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 6, 8);
         cfg.ow = static_cast<int>(n);
       }},
      {"RAW",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 4, 8);
         cfg.raw = static_cast<int>(n);
       }},
      {"NWP",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 1, 8);
         cfg.nwp = static_cast<int>(n);
       }},
      {"NRP",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 2, 8);
         cfg.nrp = static_cast<int>(n);
       }},
      {"N_PIPE",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 2, 8);
         cfg.n_pipe = static_cast<int>(n);
       }},
      {"N_CI_INPUTS",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 0, 8);
         cfg.n_ci_inputs = static_cast<int>(n);
         ci_in_set = true;
       }},
      {"N_CI_OUTPUTS",
       [&](const std::string& k, const std::string& v) {
         int64_t n = parse_number(k, v);
         check_range(k, n, 0, 8);
         cfg.n_ci_outputs = static_cast<int>(n);
         ci_out_set = true;
       }},
      {"MULT_TPL",
       [&](const std::string& k, const std::string& v) {
         std::string s = to_lower(v);
         if (s == "single_cycle" || s == "single" || s == "1") {
           cfg.mult_tpl = MultTopology::kSingleCycle;
         } else if (s == "pipelined_4" || s == "pipelined" || s == "4") {
           cfg.mult_tpl = MultTopology::kPipelined4;
         } else {
           throw InputError("config key " + k + ": unknown multiplier topology '" + v + "'");
         }
       }},
      {"SHIFTER_TPL",
       [&](const std::string& k, const std::string& v) {
         std::string s = to_lower(v);
         if (s == "funnel") {
           cfg.shifter_tpl = ShifterTopology::kFunnel;
         } else if (s == "barrel") {
           cfg.shifter_tpl = ShifterTopology::kBarrel;
         } else if (s == "dedicated") {
           cfg.shifter_tpl = ShifterTopology::kDedicated;
         } else {
           throw InputError("config key " + k + ": unknown shifter topology '" + v + "'");
         }
       }},
  };

  for (const auto& [key, value] : raw_config) {
    std::string k = canonical_key(key);
    auto it = setters.find(k);
    if (it == setters.end()) throw InputError("unknown config key '" + key + "'");
    it->second(k, value);
  }

  if (cfg.have_cop) {
    throw InputError("HAVE_COP must be false: the coprocessor interface is not modeled");
  }
  if (!is_pow2(cfg.imem_size)) throw InputError("IMEMSIZE must be a power of two");
  if (!is_pow2(cfg.dmem_size)) throw InputError("DMEMSIZE must be a power of two");
  if (cfg.have_ci) {
    if (!ci_in_set) cfg.n_ci_inputs = cfg.nrp;
    if (!ci_out_set) cfg.n_ci_outputs = cfg.nwp;
    if (cfg.n_ci_inputs < 1 || cfg.n_ci_outputs < 1) {
      throw InputError("HAVE_CI requires N_CI_INPUTS and N_CI_OUTPUTS >= 1");
    }
    if (cfg.n_ci_inputs > cfg.nrp) {
      throw InputError("N_CI_INPUTS exceeds the number of register read ports (NRP)");
    }
    if (cfg.n_ci_outputs > cfg.nwp) {
      throw InputError("N_CI_OUTPUTS exceeds the number of register write ports (NWP)");
    }
    if (cfg.ow < 7) throw InputError("HAVE_CI requires OW >= 7 (no CI opcode space)");
  } else if (cfg.n_ci_inputs > 0 || cfg.n_ci_outputs > 0) {
    throw InputError("N_CI_INPUTS/N_CI_OUTPUTS set while HAVE_CI is false");
  }
  return cfg;
}

RawConfig parse_config_text(const std::string& text, const std::string& source) {
  RawConfig out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = trim(strip_comment(line));
    if (body.empty()) continue;
    size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, lineno, 1, "expected KEY=value");
    }
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ParseError(source, lineno, 1, "empty key");
    if (out.count(key)) {
      throw ParseError(source, lineno, 1, "duplicate key '" + key + "'");
    }
    out[key] = value;
  }
  return out;
}

MachineConfig load_config_file(const std::string& path) {
  return validate_config(parse_config_text(read_file(path), path));
}

std::string config_to_text(const MachineConfig& c) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "1" : "0"; };
  os << "HAVE_CI=" << b(c.have_ci) << "\n"
     << "HAVE_COP=0\n"
     << "HAVE_ZOLC=" << b(c.have_zolc) << "\n"
     << "HAVE_SMALL_IMM=" << b(c.have_small_imm) << "\n"
     << "FORWARDING=" << b(c.forwarding) << "\n"
     << "BR_EARLY=" << b(c.br_early) << "\n"
     << "IMEMSIZE=" << c.imem_size << "\n"
     << "DMEMSIZE=" << c.dmem_size << "\n"
     << "OW=" << c.ow << "\n"
     << "RAW=" << c.raw << "\n"
     << "NWP=" << c.nwp << "\n"
     << "NRP=" << c.nrp << "\n"
     << "OPT_LS=" << b(c.opt_ls) << "\n"
     << "OPT_SHIFT=" << b(c.opt_shift) << "\n"
     << "OPT_CTI=" << b(c.opt_cti) << "\n"
     << "OPT_CVT=" << b(c.opt_cvt) << "\n"
     << "OPT_MUL=" << b(c.opt_mul) << "\n"
     << "OPT_DIV=" << b(c.opt_div) << "\n"
     << "OPT_SET=" << b(c.opt_set) << "\n"
     << "OPT_LOGIC=" << b(c.opt_logic) << "\n"
     << "MULT_TPL="
     << (c.mult_tpl == MultTopology::kSingleCycle ? "single_cycle" : "pipelined_4") << "\n"
     << "SHIFTER_TPL="
     << (c.shifter_tpl == ShifterTopology::kFunnel
             ? "funnel"
             : c.shifter_tpl == ShifterTopology::kBarrel ? "barrel" : "dedicated")
     << "\n"
     << "N_PIPE=" << c.n_pipe << "\n"
     << "N_CI_INPUTS=" << c.n_ci_inputs << "\n"
     << "N_CI_OUTPUTS=" << c.n_ci_outputs << "\n";
  return os.str();
}

MachineConfig testbed_config() {
  return validate_config({{"HAVE_CI", "1"},
                          {"HAVE_SMALL_IMM", "1"},
                          {"RAW", "8"},
                          {"NRP", "8"},
                          {"NWP", "8"},
                          {"N_CI_INPUTS", "8"},
                          {"N_CI_OUTPUTS", "8"},
                          {"OPT_LS", "1"},
                          {"OPT_SHIFT", "1"},
                          {"OPT_CTI", "1"},
                          {"OPT_CVT", "1"},
                          {"OPT_MUL", "1"},
                          {"OPT_DIV", "1"},
                          {"OPT_SET", "1"},
                          {"OPT_LOGIC", "1"},
                          {"DMEMSIZE", "65536"},
                          {"IMEMSIZE", "65536"}});
}

}  // namespace byorisc
