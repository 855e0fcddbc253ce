// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stref/interp.hpp"
#include "stref/mutate.hpp"

namespace stref {

// External engine description. `command` is an argv template; every element
// may contain the placeholders {program} and {timeout_s}. The special
// command "@self" runs the reference interpreter in-process instead of
// spawning anything (useful for self-comparison and benchmarks).
struct EngineAdapter {
  std::string name = "external";
  std::vector<std::string> command;
  double timeout_s = 10.0;
  double float_rel_tol = 0.0;      // 0 = exact textual snapshot equality
  bool program_vars_only = false;  // drop FB-internal rows before comparing
  bool in_process = false;

  static EngineAdapter self();
  static EngineAdapter from_json_file(const std::string& path);
};

struct ExecResult {
  std::string engine;
  Outcome outcome;
  int64_t wall_ms = 0;
  std::string raw;  // captured child output (external engines only)
};

struct Verdict {
  enum class K { Consistent, Inconsistent, BothTimeout } k = K::Consistent;
  enum class Reason {
    None,
    ValueMismatch,
    OneFailed,
    DifferentErrorStatement,
    OneTimeout,
  } reason = Reason::None;
  std::vector<std::string> names;  // differing qualified names (ValueMismatch)
  int line_a = -1, line_b = -1;    // abnormal statement lines
  std::string which;               // failing/timing-out side, for One* reasons
};

const char* to_string(Verdict::K k);
const char* to_string(Verdict::Reason r);

// Runs the reference interpreter on a program file with both a fuel budget
// and a wall-clock deadline derived from timeout_s.
ExecResult run_reference(const std::string& program_path, double timeout_s,
                         const Quirks& quirks = {});

// Launches the adapter command on a program file and parses its output:
// snapshot rows on stdout, `ERROR line=<n> kind=<k>` markers, a `TIMEOUT`
// marker, or a crash.
ExecResult run_external(const EngineAdapter& adapter, const std::string& program_path,
                        double timeout_s);

// The consistency measure: success/success compares snapshots, abnormal/
// abnormal compares offending statement lines, timeouts are their own
// verdicts.
Verdict compare(const ExecResult& a, const ExecResult& b, double float_rel_tol = 0.0,
                bool program_vars_only = false);

struct CampaignRow {
  std::string program;
  Verdict verdict;
  ExecResult ref, ext;
};

struct CampaignSummary {
  uint64_t programs = 0;
  uint64_t ref_completed = 0, ext_completed = 0;
  uint64_t consistent = 0, inconsistent = 0, both_timeout = 0;
  uint64_t both_success_equal = 0, both_success_different = 0;
  uint64_t ref_only_completes = 0, ext_only_completes = 0;
  uint64_t both_abnormal_same = 0, both_abnormal_different = 0, one_timeout = 0;
};

struct CampaignReport {
  std::vector<CampaignRow> rows;
  CampaignSummary summary;
  uint64_t mutants_generated = 0;
};

// Generates the mutant corpus from the seeds (written under `workdir`),
// runs the reference and the adapter on every program (seeds included), and
// tallies the verdicts. Individual program failures never abort the
// campaign. Rows come back in a deterministic order regardless of
// `parallelism`.
CampaignReport campaign(const std::vector<std::string>& seed_paths, const MutationPlan& plan,
                        const EngineAdapter& adapter, int parallelism,
                        const std::string& workdir);

std::string report_jsonl(const CampaignReport& report);
std::string summary_text(const CampaignSummary& s);

}  // namespace stref
