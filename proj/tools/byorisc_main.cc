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

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "byorisc/assembler.h"
#include "byorisc/error.h"
#include "byorisc/flow.h"
#include "byorisc/text_util.h"
#include "byorisc/zolc.h"

namespace {

using namespace byorisc;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerify = 2;

MachineConfig machine(const std::string& path) {
  return path.empty() ? testbed_config() : load_config_file(path);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

bool is_image_path(const std::string& p) { return p.ends_with(".img"); }
bool is_iseq_path(const std::string& p) { return p.ends_with(".iseq"); }

ProgramImage load_program(const std::string& path, const MachineConfig& cfg, CiLibrary& cilib) {
  const std::string text = read_file(path);
  if (is_image_path(path)) return parse_image(text, path);
  if (is_iseq_path(path)) {
    CdfgProgram p = parse_iseq(text, path);
    for (const auto& [name, ci] : p.cis) cilib.emplace(name, ci);
    return assemble(lower_iseq(p, cfg).assembly, cfg, path);
  }
  return assemble(text, cfg, path);
}

CiLibrary load_cilib(const std::string& path) {
  return path.empty() ? CiLibrary{} : parse_ci_library(read_file(path), path);
}

std::string state_dump(const MachineState& s) {
  std::ostringstream o;
  o << "pc " << s.pc << "\n";
  for (size_t r = 0; r < s.regs.size(); ++r) {
    if (s.regs[r]) o << "r" << r << " 0x" << hex(s.regs[r], 8) << "\n";
  }
  std::string mem(s.dmem.bytes().begin(), s.dmem.bytes().end());
  o << "dmem_fnv1a " << hex(fnv1a(mem), 16) << "\n";
  return o.str();
}

struct Options {
  std::string config, input, output, iseq, bxir, candidates, report, cilib, zolc, trace, out_dir;
  std::string original, rewritten, mode = "mimo", method = "greedy", format = "md", sim_mode = "both";
  std::string block, label_mode = "opcode";
  int ni = 8, no = 8, max_nodes = 0, jobs = 1, id = -1;
  double budget = 1e9;
  uint64_t max_cycles = 50'000'000, seed = 0, block_bits = kBlockRamBits;
  bool no_prune = false, allow_mem = false, dump_table = false;
};

int run_isa(const Options& o) {
  std::cout << dump_opcode_table(machine(o.config));
  return kExitOk;
}

int run_asm(const Options& o) {
  MachineConfig cfg = machine(o.config);
  emit(o.output, serialize_image(assemble(read_file(o.input), cfg, o.input)));
  return kExitOk;
}

int run_disasm(const Options& o) {
  MachineConfig cfg = machine(o.config);
  CiLibrary lib;
  emit(o.output, disassemble(load_program(o.input, cfg, lib), cfg));
  return kExitOk;
}

int run_sim(const Options& o) {
  MachineConfig cfg = machine(o.config);
  CiLibrary lib = load_cilib(o.cilib);
  ProgramImage img = load_program(o.input, cfg, lib);
  std::optional<ZolcTable> zolc;
  if (!o.zolc.empty()) {
    if (!cfg.have_zolc) throw InputError("a ZOLC table needs HAVE_ZOLC=1");
    zolc = parse_zolc(read_file(o.zolc), o.zolc, &img);
  }
  std::ostringstream out;
  int code = kExitOk;
  std::optional<IssResult> iss;
  if (o.sim_mode != "pipeline") {
    iss = run_iss(img, cfg, lib, o.max_cycles, zolc ? &*zolc : nullptr);
    out << "[iss]\nstatus " << status_name(iss->status) << "\nretired " << iss->retired << "\n";
    if (iss->fault) out << "fault " << iss->fault->describe() << "\n";
    out << state_dump(iss->state);
    if (iss->status == RunStatus::kTrap) code = kExitInput;
  }
  if (o.sim_mode != "iss") {
    PipelineOptions po;
    po.max_cycles = o.max_cycles;
    po.trace = !o.trace.empty();
    po.zolc = zolc ? &*zolc : nullptr;
    SimResult r = run_pipeline(img, cfg, lib, po);
    out << "[pipeline]\nstatus " << status_name(r.status) << "\ncycles " << r.cycles << "\nretired "
        << r.retired << "\n";
    for (const auto& [cause, n] : r.stalls) out << "stall_" << cause << " " << n << "\n";
    if (r.fault) out << "fault " << r.fault->describe() << "\n";
    out << state_dump(r.final_state);
    if (po.trace) {
      std::string csv;
      for (const std::string& row : r.trace) csv += row + "\n";
      write_file(o.trace, csv);
    }
    if (r.status == RunStatus::kTrap) code = kExitInput;
    if (iss && !(iss->state.regs == r.final_state.regs && iss->state.dmem == r.final_state.dmem)) {
      out << "MISMATCH between ISS and pipeline\n";
      code = kExitVerify;
    }
  }
  emit(o.output, out.str());
  return code;
}

int run_metrics(const Options& o) {
  CdfgProgram p = parse_iseq(read_file(o.iseq), o.iseq);
  if (!o.bxir.empty()) check_bxir_coverage(p, parse_bxir(read_file(o.bxir), o.bxir));
  std::ostringstream out;
  out << "block,freq,num_ops,max_ilp,csteps,avg_ilp\n";
  for (const Dfg& g : build_program_dfgs(p)) {
    IlpMetrics m = asap_metrics(g);
    out << g.label << "," << g.freq << "," << m.num_ops << "," << m.max_ilp << "," << m.csteps << ","
        << m.avg_ilp.value() << "\n";
  }
  emit(o.output, out.str());
  return kExitOk;
}

CiConstraints constraints(const Options& o) {
  CiConstraints c;
  c.n_i = o.ni;
  c.n_o = o.no;
  c.allow_mem = o.allow_mem;
  c.max_nodes = o.max_nodes;
  if (c.n_i < 1 || c.n_o < 1) throw InputError("--ni and --no must be at least 1");
  return c;
}

int run_cigen(const Options& o) {
  CdfgProgram p = parse_iseq(read_file(o.iseq), o.iseq);
  Bxir b = parse_bxir(read_file(o.bxir), o.bxir);
  check_bxir_coverage(p, b);
  std::vector<Dfg> dfgs = build_program_dfgs(p);
  CiConstraints c = constraints(o);
  std::vector<CiCandidate> all;
  for (size_t bi = 0; bi < dfgs.size(); ++bi) {
    std::vector<CiCandidate> found;
    const int idx = static_cast<int>(bi);
    if (o.mode == "mimo") {
      found = enumerate_mimo(dfgs[bi], idx, c, b, !o.no_prune).candidates;
    } else if (o.mode == "miso") {
      found = enumerate_miso(dfgs[bi], idx, c, b);
    } else if (o.mode == "maxmiso") {
      found = enumerate_maxmiso(dfgs[bi], idx, b, &c);
    } else {
      throw InputError("unknown mode '" + o.mode + "'");
    }
    for (CiCandidate& k : found) all.push_back(std::move(k));
  }
  for (size_t k = 0; k < all.size(); ++k) all[k].id = static_cast<int>(k);
  emit(o.output, serialize_candidates(all));
  return kExitOk;
}

int run_select(const Options& o) {
  CdfgProgram p = parse_iseq(read_file(o.iseq), o.iseq);
  Bxir b = parse_bxir(read_file(o.bxir), o.bxir);
  check_bxir_coverage(p, b);
  std::vector<Dfg> dfgs = build_program_dfgs(p);
  std::vector<CiCandidate> cands = parse_candidates(read_file(o.candidates), p, dfgs, b, o.candidates);
  SelectionReport r;
  if (o.method == "greedy") {
    r = select_greedy(cands, dfgs, o.budget);
  } else if (o.method == "knapsack") {
    r = select_knapsack(cands, dfgs, o.budget);
  } else {
    throw InputError("unknown method '" + o.method + "'");
  }
  estimate_speedup(p, r, b);
  for (size_t k = 0; k < r.chosen.size(); ++k) r.chosen[k].name = p.name + std::to_string(k + 1);
  emit(o.report.empty() ? o.output : o.report,
       o.format == "csv" ? format_report_csv(r) : format_report_markdown(r));
  return kExitOk;
}

int run_dse(const Options& o) {
  const std::string iseq_text = read_file(o.iseq);
  const std::string bxir_text = read_file(o.bxir);
  CdfgProgram p = parse_iseq(iseq_text, o.iseq);
  Bxir b = parse_bxir(bxir_text, o.bxir);
  MachineConfig cfg = machine(o.config);
  DseOptions d;
  d.constraints = constraints(o);
  d.constraints.allow_mem = true;
  d.budget = o.budget;
  d.method = o.method;
  d.jobs = o.jobs;
  d.label_mode = o.label_mode == "class" ? LabelMode::kResourceClass : LabelMode::kOpcode;
  DseBundle bundle = cmd_dse(p, b, cfg, d);
  RunManifest m = make_manifest("dse", o.seed);
  m.config_path = o.config.empty() ? "<testbed>" : o.config;
  if (!o.config.empty()) m.add_input(o.config, read_file(o.config));
  m.add_input(o.iseq, iseq_text);
  m.add_input(o.bxir, bxir_text);
  const std::string dir = o.out_dir.empty() ? "dse_out" : o.out_dir;
  write_bundle(bundle, dir, m);
  std::cout << format_report_markdown(bundle.report);
  std::cout << "artifacts written to " << dir << "\n";
  return kExitOk;
}

ProgramInput program_input(const std::string& path, const CiLibrary& lib) {
  ProgramInput in;
  in.kind = is_iseq_path(path) ? ProgramInput::Kind::kIseq : ProgramInput::Kind::kAsm;
  in.text = read_file(path);
  in.name = path;
  in.cilib = lib;
  return in;
}

int run_verify(const Options& o) {
  MachineConfig cfg = machine(o.config);
  CiLibrary lib = load_cilib(o.cilib);
  VerifyResult r = cmd_verify(program_input(o.original, {}), program_input(o.rewritten, lib), cfg, o.max_cycles);
  emit(o.output, r.report);
  return r.pass ? kExitOk : kExitVerify;
}

int run_cost(const Options& o) {
  CostReport r = cost_report(machine(o.config), o.block_bits);
  emit(o.output, o.format == "csv" ? format_cost_csv(r) : format_cost_text(r) + "\n" + format_cost_csv(r));
  return kExitOk;
}

int run_export_dot(const Options& o) {
  CdfgProgram p = parse_iseq(read_file(o.iseq), o.iseq);
  std::vector<Dfg> dfgs = build_program_dfgs(p);
  if (!o.candidates.empty()) {
    Bxir b = parse_bxir(read_file(o.bxir), o.bxir);
    std::vector<CiCandidate> cands = parse_candidates(read_file(o.candidates), p, dfgs, b, o.candidates);
    for (const CiCandidate& c : cands) {
      if (c.id == o.id) {
        emit(o.output, export_dot(dfgs[c.block_index], c.nodes, "cand" + std::to_string(c.id)));
        return kExitOk;
      }
    }
    throw InputError("no candidate with id " + std::to_string(o.id));
  }
  std::string out;
  for (const Dfg& g : dfgs) {
    if (o.block.empty() || g.label == o.block) out += export_dot(g);
  }
  if (out.empty()) throw InputError("no block named '" + o.block + "'");
  emit(o.output, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ByoRISC processor toolkit and custom instruction design space exploration"};
  app.require_subcommand(1);
  Options o;

  auto* isa = app.add_subcommand("isa", "Show the instruction set");
  isa->add_flag("--dump-table", o.dump_table, "Print the opcode table");
  isa->add_option("--config", o.config, "Machine configuration");

  auto* as = app.add_subcommand("asm", "Assemble to a program image");
  as->add_option("input", o.input, "Assembly source")->required();
  as->add_option("-o,--output", o.output, "Image file");
  as->add_option("--config", o.config, "Machine configuration");

  auto* dis = app.add_subcommand("disasm", "Disassemble a program image");
  dis->add_option("input", o.input, "Image, assembly or ISeq file")->required();
  dis->add_option("-o,--output", o.output, "Output file");
  dis->add_option("--config", o.config, "Machine configuration");

  auto* sim = app.add_subcommand("sim", "Run the ISS and the pipeline model");
  sim->add_option("input", o.input, "Image, assembly or ISeq file")->required();
  sim->add_option("--config", o.config, "Machine configuration");
  sim->add_option("--cilib", o.cilib, "Custom instruction behaviors");
  sim->add_option("--zolc", o.zolc, "ZOLC task table");
  sim->add_option("--trace", o.trace, "Per-cycle pipeline trace (CSV)");
  sim->add_option("--mode", o.sim_mode, "iss, pipeline or both")->check(CLI::IsMember({"iss", "pipeline", "both"}));
  sim->add_option("--max-cycles", o.max_cycles, "Cycle and step budget");
  sim->add_option("-o,--output", o.output, "Output file");

  auto* met = app.add_subcommand("metrics", "Per-block ILP metrics");
  met->alias("cdfg");
  met->add_option("--iseq", o.iseq, "ISeq program")->required();
  met->add_option("--bxir", o.bxir, "Check opcode coverage against a BXIR table");
  met->add_option("-o,--output", o.output, "Output file");

  auto* cg = app.add_subcommand("cigen", "Enumerate custom instruction candidates");
  cg->add_option("--iseq", o.iseq, "ISeq program")->required();
  cg->add_option("--bxir", o.bxir, "BXIR table")->required();
  cg->add_option("--ni", o.ni, "Input operand bound");
  cg->add_option("--no", o.no, "Output operand bound");
  cg->add_option("--mode", o.mode, "mimo, miso or maxmiso")->check(CLI::IsMember({"mimo", "miso", "maxmiso"}));
  cg->add_flag("--no-prune", o.no_prune, "Exhaustive MIMO enumeration");
  cg->add_flag("--allow-mem", o.allow_mem, "Allow loads and stores in candidates");
  cg->add_option("--max-nodes", o.max_nodes, "Node cap per candidate");
  cg->add_option("-o,--out", o.output, "Candidate file");

  auto* sel = app.add_subcommand("select", "Select candidates under an area budget");
  sel->alias("cisel");
  sel->add_option("--iseq", o.iseq, "ISeq program")->required();
  sel->add_option("--candidates", o.candidates, "Candidate file")->required();
  sel->add_option("--bxir", o.bxir, "BXIR table")->required();
  sel->add_option("--budget", o.budget, "Area budget in MAU");
  sel->add_option("--method", o.method, "greedy or knapsack")->check(CLI::IsMember({"greedy", "knapsack"}));
  sel->add_option("--format", o.format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  sel->add_option("--report", o.report, "Report file");

  auto* dse = app.add_subcommand("dse", "Full exploration flow");
  dse->add_option("--iseq", o.iseq, "ISeq program")->required();
  dse->add_option("--bxir", o.bxir, "BXIR table")->required();
  dse->add_option("--config", o.config, "Machine configuration");
  dse->add_option("--budget", o.budget, "Area budget in MAU");
  dse->add_option("--ni", o.ni, "Input operand bound");
  dse->add_option("--no", o.no, "Output operand bound");
  dse->add_option("--method", o.method, "greedy or knapsack")->check(CLI::IsMember({"greedy", "knapsack"}));
  dse->add_option("--labels", o.label_mode, "opcode or class")->check(CLI::IsMember({"opcode", "class"}));
  dse->add_option("--jobs", o.jobs, "Worker threads");
  dse->add_option("--seed", o.seed, "Recorded in the manifest");
  dse->add_option("--out-dir", o.out_dir, "Artifact directory");

  auto* ver = app.add_subcommand("verify", "Check a rewritten program against the original");
  ver->add_option("--original", o.original, "Original ISeq or assembly")->required();
  ver->add_option("--rewritten", o.rewritten, "Rewritten ISeq or assembly")->required();
  ver->add_option("--config", o.config, "Machine configuration");
  ver->add_option("--cilib", o.cilib, "Custom instruction behaviors for assembly inputs");
  ver->add_option("--max-cycles", o.max_cycles, "Cycle and step budget");
  ver->add_option("-o,--output", o.output, "Report file");

  auto* cost = app.add_subcommand("cost", "Structural hardware cost");
  cost->add_option("--config", o.config, "Machine configuration");
  cost->add_option("--block-bits", o.block_bits, "Block RAM capacity in bits");
  cost->add_option("--format", o.format, "text or csv");
  cost->add_option("-o,--output", o.output, "Output file");

  auto* dot = app.add_subcommand("export-dot", "Graphviz export of block graphs or a candidate");
  dot->add_option("--iseq", o.iseq, "ISeq program")->required();
  dot->add_option("--block", o.block, "Only this block");
  dot->add_option("--candidates", o.candidates, "Candidate file");
  dot->add_option("--bxir", o.bxir, "BXIR table, needed with --candidates");
  dot->add_option("--id", o.id, "Candidate id");
  dot->add_option("-o,--output", o.output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*isa) return run_isa(o);
    if (*as) return run_asm(o);
    if (*dis) return run_disasm(o);
    if (*sim) return run_sim(o);
    if (*met) return run_metrics(o);
    if (*cg) return run_cigen(o);
    if (*sel) return run_select(o);
    if (*dse) return run_dse(o);
    if (*ver) return run_verify(o);
    if (*cost) return run_cost(o);
    if (*dot) return run_export_dot(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
