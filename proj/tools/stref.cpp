// SPDX-License-Identifier: Apache-2.0
//
// stref - a reference interpreter and differential tester for IEC 61131-3
// Structured Text.
//
//   stref run <program.st>        execute and print the variable snapshot
//   stref check <program.st>      parse + preprocess only
//   stref mutate <seeds...>       generate a mutant corpus
//   stref difftest <seeds...>     compare an external engine to the reference

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stref/difftest.hpp"
#include "stref/interp.hpp"
#include "stref/mutate.hpp"
#include "stref/parser.hpp"
#include "stref/printer.hpp"

namespace fs = std::filesystem;
using namespace stref;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitTimeout = 124;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrKind::IOError, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_run(const std::string& path, const std::string& entry, double timeout_s) {
  SourceUnit unit;
  try {
    unit = parse_source(read_file(path));
  } catch (const Error& e) {
    std::cerr << "ERROR line=" << e.line << " kind=" << to_string(e.kind)
              << " msg=" << e.what() << "\n";
    return 1;
  }
  uint64_t fuel = static_cast<uint64_t>(timeout_s * static_cast<double>(kFuelPerSecond));
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long long>(timeout_s * 2000));
  Outcome out = run(unit, entry, fuel, {}, deadline);
  for (const auto& note : out.notes) std::cerr << note << "\n";
  switch (out.k) {
    case Outcome::K::Success:
      std::cout << render_rows(out.rows);
      return 0;
    case Outcome::K::Abnormal:
      std::cerr << "ERROR line=" << out.line << " kind=" << to_string(out.err)
                << " msg=" << out.msg << "\n";
      return 1;
    default:
      std::cerr << "TIMEOUT after " << timeout_s << "s\n";
      return kExitTimeout;
  }
}

int cmd_check(const std::string& path) {
  try {
    SourceUnit unit = parse_source(read_file(path));
    Machine m = preprocess(unit);
    (void)m;
  } catch (const Error& e) {
    std::cerr << "error: line " << e.line << " col " << e.column << ": "
              << to_string(e.kind) << ": " << e.what() << "\n";
    return 1;
  }
  std::cout << "OK\n";
  return 0;
}

int cmd_mutate(const std::vector<std::string>& seeds, const MutationPlan& plan,
               const std::string& out_dir, int jobs) {
  std::vector<SourceUnit> units;
  for (const auto& p : seeds) units.push_back(parse_source(read_file(p)));

  std::vector<Mutant> mutants = mutate_program(units, plan, jobs);
  fs::create_directories(out_dir);
  std::ofstream manifest(fs::path(out_dir) / "manifest.jsonl", std::ios::binary);
  if (!manifest) throw Error(ErrKind::IOError, "cannot write to '" + out_dir + "'");

  size_t i = 0;
  for (const auto& m : mutants) {
    char name[64];
    std::snprintf(name, sizeof name, "m%d_%06zu.st", m.round, i);
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw Error(ErrKind::IOError, "cannot write mutant file");
    out << pretty_print(m.unit);

    nlohmann::ordered_json j;
    j["file"] = name;
    j["seed"] = seeds[m.seed_index];
    j["round"] = m.round;
    if (m.parent_index != SIZE_MAX) {
      char parent[64];
      std::snprintf(parent, sizeof parent, "m%d_%06zu.st", m.round - 1, m.parent_index);
      j["parent"] = parent;
    } else {
      j["parent"] = seeds[m.seed_index];
    }
    j["rng"] = m.rng_seed;
    j["ops"] = m.operator_trace;
    if (!m.skipped.empty()) j["skipped"] = m.skipped;
    manifest << j.dump() << "\n";
    ++i;
  }
  std::cout << "seeds: " << seeds.size() << "\nmutants: " << mutants.size()
            << "\nwritten to: " << out_dir << "\n";
  return 0;
}

int cmd_difftest(const std::vector<std::string>& seeds, const MutationPlan& plan,
                 const EngineAdapter& adapter, int jobs, const std::string& out_dir) {
  fs::create_directories(out_dir);
  CampaignReport report = campaign(seeds, plan, adapter, jobs,
                                   (fs::path(out_dir) / "mutants").string());
  std::ofstream rep(fs::path(out_dir) / "report.jsonl", std::ios::binary);
  rep << report_jsonl(report);
  std::cout << summary_text(report.summary);
  return report.summary.inconsistent > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured Text reference interpreter and differential tester"};
  app.require_subcommand(1);

  std::string program, entry = "MAIN";
  double timeout_s = 10.0;
  std::vector<std::string> seeds;
  std::string out_dir = "out";
  std::string adapter_path, adapter_cmd;
  MutationPlan plan;
  int jobs = 1;

  auto* run_cmd = app.add_subcommand("run", "execute a program and print its snapshot");
  run_cmd->add_option("program", program, "program file")->required();
  run_cmd->add_option("--entry", entry, "entry PROGRAM name (default MAIN)");
  run_cmd->add_option("--timeout", timeout_s, "time limit in seconds (default 10)");

  auto* check_cmd = app.add_subcommand("check", "parse and preprocess only");
  check_cmd->add_option("program", program, "program file")->required();

  auto* mutate_cmd = app.add_subcommand("mutate", "generate a mutant corpus");
  mutate_cmd->add_option("seeds", seeds, "seed programs")->required();
  mutate_cmd->add_option("--seed", plan.rng_seed, "rng seed (default 1)");
  mutate_cmd->add_option("--rounds", plan.rounds, "mutation rounds (default 3)");
  mutate_cmd->add_option("--per-seed", plan.mutants_per_seed, "mutants per seed (default 10)");
  mutate_cmd->add_option("--max-ops", plan.max_ops_per_mutant,
                         "max operators per mutant (default 3)");
  mutate_cmd->add_option("--out", out_dir, "output directory");
  mutate_cmd->add_option("--jobs", jobs, "worker threads");

  auto* diff_cmd = app.add_subcommand("difftest", "mutate, run both engines, compare");
  diff_cmd->add_option("seeds", seeds, "seed programs")->required();
  diff_cmd->add_option("--adapter", adapter_path, "adapter config (JSON)");
  diff_cmd->add_option("--adapter-cmd", adapter_cmd,
                       "adapter argv template, e.g. 'engine run {program}'");
  diff_cmd->add_option("--seed", plan.rng_seed, "rng seed (default 1)");
  diff_cmd->add_option("--rounds", plan.rounds,
                       "mutation rounds, 0 = run seeds only (default 3)");
  diff_cmd->add_option("--per-seed", plan.mutants_per_seed, "mutants per seed (default 10)");
  diff_cmd->add_option("--max-ops", plan.max_ops_per_mutant,
                       "max operators per mutant (default 3)");
  diff_cmd->add_option("--timeout", timeout_s, "per-program time limit (default 10)");
  diff_cmd->add_option("--jobs", jobs, "parallel program executions");
  diff_cmd->add_option("--out", out_dir, "report/mutant directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(program, entry, timeout_s);
    if (check_cmd->parsed()) return cmd_check(program);
    if (mutate_cmd->parsed()) return cmd_mutate(seeds, plan, out_dir, jobs);
    if (diff_cmd->parsed()) {
      EngineAdapter adapter;
      if (!adapter_path.empty()) {
        adapter = EngineAdapter::from_json_file(adapter_path);
      } else if (!adapter_cmd.empty()) {
        if (adapter_cmd == "@self") {
          adapter = EngineAdapter::self();
        } else {
          std::istringstream ss(adapter_cmd);
          std::string word;
          while (ss >> word) adapter.command.push_back(word);
        }
      } else {
        std::cerr << "difftest needs --adapter or --adapter-cmd\n";
        return kExitUsage;
      }
      if (diff_cmd->count("--timeout") || adapter.in_process)
        adapter.timeout_s = timeout_s;
      return cmd_difftest(seeds, plan, adapter, jobs, out_dir);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind) << ": " << e.what() << "\n";
    return e.kind == ErrKind::AdapterError || e.kind == ErrKind::IOError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return kExitUsage;
}
