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

#include "byorisc/flow.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "byorisc/assembler.h"
#include "byorisc/error.h"
#include "byorisc/text_util.h"

namespace byorisc {

void RunManifest::add_input(const std::string& path, const std::string& content) {
  inputs.emplace_back(path, fnv1a(content));
}

std::string RunManifest::text(const std::string& prefix) const {
  std::ostringstream o;
  o << prefix << "tool byorisc " << kToolVersion << "\n";
  o << prefix << "command " << command << "\n";
  if (!config_path.empty()) o << prefix << "config " << config_path << "\n";
  for (const auto& [path, digest] : inputs) {
    o << prefix << "input " << path << " fnv1a=" << hex(digest, 16) << "\n";
  }
  o << prefix << "seed " << seed << "\n";
  o << prefix << "timestamp " << (timestamp ? std::to_string(*timestamp) : std::string("unset")) << "\n";
  o << prefix << "output_digest fnv1a=" << hex(output_digest, 16) << "\n";
  return o.str();
}

RunManifest make_manifest(const std::string& command, uint64_t seed) {
  RunManifest m;
  m.command = command;
  m.seed = seed;
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) {
    if (auto v = parse_int(e)) m.timestamp = *v;
  }
  return m;
}

namespace {

std::string sid_directives(const std::string& assembly) {
  std::ostringstream o;
  std::istringstream in(assembly);
  std::string line;
  while (std::getline(in, line)) {
    std::string t(trim(line));
    if (t.starts_with("ci ")) o << ".ci " << t.substr(3) << "\n";
  }
  return o.str();
}

}  // namespace

DseBundle cmd_dse(const CdfgProgram& prog, const Bxir& bxir, const MachineConfig& cfg, const DseOptions& opts) {
  if (!cfg.have_ci) throw InputError("the configuration has no custom instruction support (HAVE_CI=0)");
  if (opts.constraints.n_i > cfg.n_ci_inputs || opts.constraints.n_o > cfg.n_ci_outputs) {
    throw InputError("constraints (" + std::to_string(opts.constraints.n_i) + "," +
                     std::to_string(opts.constraints.n_o) + ") exceed the machine's CI operands (" +
                     std::to_string(cfg.n_ci_inputs) + "," + std::to_string(cfg.n_ci_outputs) + ")");
  }
  if (opts.method != "greedy" && opts.method != "knapsack") {
    throw InputError("unknown selection method '" + opts.method + "'");
  }
  check_bxir_coverage(prog, bxir);
  DseBundle b;
  b.original = prog;
  b.dfgs = build_program_dfgs(prog);
  b.candidates = extract_candidates(b.dfgs, opts.constraints, bxir, opts.jobs);
  b.templates = dedup_patterns(b.candidates, b.dfgs, opts.label_mode, default_class_map());
  b.report = opts.method == "knapsack" ? select_knapsack(b.candidates, b.dfgs, opts.budget)
                                       : select_greedy(b.candidates, b.dfgs, opts.budget);
  std::map<int, int> template_of;
  for (const CiTemplate& t : b.templates) {
    for (int m : t.members) template_of[b.candidates[m].id] = t.id;
  }
  std::map<int, double> template_area;
  for (SelectedCi& s : b.report.chosen) {
    s.template_id = template_of.at(s.cand.id);
    template_area.emplace(s.template_id, s.cand.area);
  }
  b.report.template_area = 0;
  for (const auto& [t, a] : template_area) b.report.template_area += a;
  estimate_speedup(prog, b.report, bxir);

  MappedProgram mapped = map_cis(prog, b.dfgs, b.report, bxir, &cfg);
  b.rewritten = std::move(mapped.program);
  b.original_asm = lower_iseq(b.original, cfg);
  b.rewritten_asm = lower_iseq(b.rewritten, cfg, &b.original_asm.regs);
  b.ci_directives = sid_directives(b.rewritten_asm.assembly);

  for (const Dfg& g : b.dfgs) b.dot_files["block_" + block_label(g.label).substr(3) + ".dot"] = export_dot(g);
  std::set<std::string> drawn;
  for (const SelectedCi& s : b.report.chosen) {
    if (!drawn.insert(s.name).second) continue;
    b.dot_files["ci_" + s.name + ".dot"] = export_dot(b.dfgs[s.cand.block_index], s.cand.nodes, s.name);
  }
  b.cost = cost_report(cfg);
  return b;
}

std::vector<std::string> write_bundle(const DseBundle& b, const std::string& dir, RunManifest manifest) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::map<std::string, std::string> files;
  files["candidates.txt"] = serialize_candidates(b.candidates);
  files["report.csv"] = format_report_csv(b.report);
  files["report.md"] = format_report_markdown(b.report);
  files["rewritten.iseq"] = serialize_iseq(b.rewritten);
  files["original.s"] = b.original_asm.assembly;
  files["rewritten.s"] = b.rewritten_asm.assembly;
  files["sid.s"] = b.ci_directives;
  std::string lib;
  for (const auto& [name, ci] : b.rewritten.cis) lib += serialize_ci(ci);
  files["cilib.txt"] = lib;
  files["cost.txt"] = format_cost_text(b.cost);
  files["cost.csv"] = format_cost_csv(b.cost);
  for (const auto& [name, text] : b.dot_files) files[name] = text;

  std::string all;
  for (const auto& [name, text] : files) all += name + "\n" + text;
  manifest.output_digest = fnv1a(all);

  std::vector<std::string> written;
  for (auto [name, text] : files) {
    if (name == "report.csv" || name == "cost.txt" || name == "cost.csv" || name == "candidates.txt") {
      text = manifest.text("# ") + text;
    } else if (name == "report.md") {
      text += "\n```\n" + manifest.text() + "```\n";
    }
    write_file((fs::path(dir) / name).string(), text);
    written.push_back(name);
  }
  write_file((fs::path(dir) / "manifest.txt").string(), manifest.text());
  written.push_back("manifest.txt");
  return written;
}

namespace {

struct Prepared {
  ProgramImage image;
  CiLibrary cilib;
  std::optional<CdfgProgram> prog;
  std::optional<LoweredProgram> lowered;
};

Prepared prepare(const ProgramInput& in, const MachineConfig& cfg, const RegisterMap* base) {
  Prepared p;
  if (in.kind == ProgramInput::Kind::kIseq) {
    p.prog = parse_iseq(in.text, in.name);
    p.lowered = lower_iseq(*p.prog, cfg, base);
    p.image = assemble(p.lowered->assembly, cfg, in.name + " (lowered)");
    p.cilib = p.prog->cis;
  } else {
    p.image = assemble(in.text, cfg, in.name);
  }
  for (const auto& [name, ci] : in.cilib) p.cilib.emplace(name, ci);
  return p;
}

void check_run(const std::string& what, const SimPair& s, std::ostringstream& o, bool& pass) {
  if (s.iss.status != RunStatus::kHalted) {
    pass = false;
    o << what << ": ISS stopped with " << status_name(s.iss.status);
    if (s.iss.fault) o << " (" << s.iss.fault->describe() << ")";
    o << "\n";
  }
  if (s.pipe.status != RunStatus::kHalted) {
    pass = false;
    o << what << ": pipeline stopped with " << status_name(s.pipe.status);
    if (s.pipe.fault) o << " (" << s.pipe.fault->describe() << ")";
    o << "\n";
  }
  if (s.iss.state.regs != s.pipe.final_state.regs || !(s.iss.state.dmem == s.pipe.final_state.dmem)) {
    pass = false;
    o << what << ": ISS and pipeline final states differ\n";
  }
}

int diff_memory(const DataMemory& a, const DataMemory& b, std::ostringstream& o) {
  int diffs = 0;
  for (uint32_t k = 0; k < a.size() && k < b.size(); ++k) {
    if (a.byte(k) == b.byte(k)) continue;
    if (diffs < 8) {
      o << "  dmem[0x" << hex(k, 4) << "]: 0x" << hex(a.byte(k), 2) << " vs 0x" << hex(b.byte(k), 2) << "\n";
    }
    ++diffs;
  }
  return diffs;
}

}  // namespace

VerifyResult cmd_verify(const ProgramInput& original, const ProgramInput& rewritten, const MachineConfig& cfg,
                        uint64_t max_cycles) {
  VerifyResult r;
  std::ostringstream o;
  bool pass = true;
  Prepared a = prepare(original, cfg, nullptr);
  Prepared b = prepare(rewritten, cfg, a.lowered ? &a.lowered->regs : nullptr);

  PipelineOptions po;
  po.max_cycles = max_cycles;
  r.original = {run_iss(a.image, cfg, a.cilib, max_cycles), run_pipeline(a.image, cfg, a.cilib, po)};
  r.rewritten = {run_iss(b.image, cfg, b.cilib, max_cycles), run_pipeline(b.image, cfg, b.cilib, po)};
  check_run("original", r.original, o, pass);
  check_run("rewritten", r.rewritten, o, pass);

  // Observable registers: live-at-exit names for ISeq, the whole file otherwise.
  std::vector<std::pair<std::string, uint8_t>> observed;
  if (a.prog) {
    for (const std::string& name : a.prog->live_at_exit) observed.push_back({name, a.lowered->regs.names.at(name)});
  } else {
    for (uint32_t k = 1; k < cfg.num_registers(); ++k) observed.push_back({"r" + std::to_string(k), static_cast<uint8_t>(k)});
  }

  if (a.prog) {
    IseqRun ref = run_iseq(*a.prog, cfg.dmem_size, max_cycles);
    if (ref.fault || ref.budget_exhausted) {
      pass = false;
      o << "original: ISeq interpreter did not finish\n";
    } else {
      for (const auto& [name, reg] : observed) {
        const uint32_t want = ref.values.count(name) ? ref.values.at(name) : 0;
        if (r.original.iss.state.regs[reg] != want) {
          pass = false;
          o << "original: lowered value of " << name << " differs from the ISeq interpreter\n";
        }
      }
      if (!(ref.dmem == r.original.iss.state.dmem)) {
        pass = false;
        o << "original: lowered memory differs from the ISeq interpreter\n";
      }
    }
  }

  const MachineState& sa = r.original.pipe.final_state;
  const MachineState& sb = r.rewritten.pipe.final_state;
  int mismatches = 0;
  std::ostringstream diff;
  for (const auto& [name, reg] : observed) {
    if (sa.regs.at(reg) == sb.regs.at(reg)) continue;
    if (mismatches < 8) {
      diff << "  " << name << " (r" << int(reg) << "): 0x" << hex(sa.regs[reg], 8) << " vs 0x"
           << hex(sb.regs[reg], 8) << "\n";
    }
    ++mismatches;
  }
  mismatches += diff_memory(sa.dmem, sb.dmem, diff);
  if (mismatches) {
    pass = false;
    o << "state mismatch between original and rewritten (" << mismatches << " differences)\n" << diff.str();
  }
  if (r.rewritten.cycles() > r.original.cycles()) {
    pass = false;
    o << "rewritten program is slower: " << r.rewritten.cycles() << " > " << r.original.cycles() << " cycles\n";
  }
  r.simulated_speedup = r.rewritten.cycles() ? static_cast<double>(r.original.cycles()) / r.rewritten.cycles() : 0.0;
  o << "original cycles " << r.original.cycles() << ", retired " << r.original.pipe.retired << "\n";
  o << "rewritten cycles " << r.rewritten.cycles() << ", retired " << r.rewritten.pipe.retired << "\n";
  o << "simulated speedup " << r.simulated_speedup << "\n";
  o << (pass ? "PASS" : "FAIL") << "\n";
  r.pass = pass;
  r.report = o.str();
  return r;
}

}  // namespace byorisc
