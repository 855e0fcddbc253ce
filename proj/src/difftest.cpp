// SPDX-License-Identifier: Apache-2.0
#include "stref/difftest.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "stref/parser.hpp"
#include "stref/printer.hpp"
#include "stref/subprocess.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stref {

namespace fs = std::filesystem;

const char* to_string(Verdict::K k) {
  switch (k) {
    case Verdict::K::Consistent: return "Consistent";
    case Verdict::K::Inconsistent: return "Inconsistent";
    case Verdict::K::BothTimeout: return "BothTimeout";
  }
  return "?";
}

const char* to_string(Verdict::Reason r) {
  switch (r) {
    case Verdict::Reason::None: return "none";
    case Verdict::Reason::ValueMismatch: return "value-mismatch";
    case Verdict::Reason::OneFailed: return "one-failed";
    case Verdict::Reason::DifferentErrorStatement: return "different-error-statement";
    case Verdict::Reason::OneTimeout: return "one-timeout";
  }
  return "?";
}

EngineAdapter EngineAdapter::self() {
  EngineAdapter a;
  a.name = "self";
  a.in_process = true;
  return a;
}

EngineAdapter EngineAdapter::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrKind::AdapterError, "cannot read adapter config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrKind::AdapterError, "bad adapter config: " + std::string(e.what()));
  }
  EngineAdapter a;
  a.name = j.value("name", std::string("external"));
  a.timeout_s = j.value("timeout_s", 10.0);
  a.float_rel_tol = j.value("float_rel_tol", 0.0);
  a.program_vars_only = j.value("program_vars_only", false);
  if (!j.contains("command"))
    throw Error(ErrKind::AdapterError, "adapter config needs a 'command'");
  if (j["command"].is_string()) {
    std::istringstream ss(j["command"].get<std::string>());
    std::string word;
    while (ss >> word) a.command.push_back(word);
  } else {
    for (const auto& e : j["command"]) a.command.push_back(e.get<std::string>());
  }
  if (a.command.size() == 1 && a.command[0] == "@self") {
    a.command.clear();
    a.in_process = true;
  }
  if (!a.in_process && a.command.empty())
    throw Error(ErrKind::AdapterError, "adapter command is empty");
  return a;
}

// ---------------------------------------------------------------------------
// Engine runs
// ---------------------------------------------------------------------------

ExecResult run_reference(const std::string& program_path, double timeout_s,
                         const Quirks& quirks) {
  ExecResult r;
  r.engine = "reference";
  auto t0 = std::chrono::steady_clock::now();
  std::ifstream in(program_path, std::ios::binary);
  if (!in) throw Error(ErrKind::IOError, "cannot read '" + program_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string source = buf.str();

  SourceUnit unit;
  try {
    unit = parse_source(source);
    uint64_t fuel = static_cast<uint64_t>(timeout_s * static_cast<double>(kFuelPerSecond));
    // the fuel budget is the deterministic limit; the wall deadline is a
    // backstop at twice the nominal timeout
    auto deadline = t0 + std::chrono::milliseconds(static_cast<long long>(timeout_s * 2000));
    r.outcome = run(unit, "MAIN", fuel, quirks, deadline);
  } catch (const Error& e) {
    r.outcome.k = Outcome::K::Abnormal;
    r.outcome.err = e.kind;
    r.outcome.line = e.line;
    r.outcome.msg = e.what();
  }
  r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return r;
}

namespace {

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  size_t pos = 0;
  while ((pos = s.find(key, pos)) != std::string::npos) {
    s.replace(pos, key.size(), value);
    pos += value.size();
  }
  return s;
}

bool parse_snapshot_line(const std::string& line, SnapshotRow& row) {
  size_t colon = line.find(" : ");
  if (colon == std::string::npos || colon == 0) return false;
  size_t eq = line.find(" = ", colon + 3);
  if (eq == std::string::npos) return false;
  row.name = line.substr(0, colon);
  row.type = line.substr(colon + 3, eq - colon - 3);
  row.value = line.substr(eq + 3);
  return row.name.find(' ') == std::string::npos;
}

// First `ERROR line=<n> kind=<k>` marker in the text, if any.
bool find_error_marker(const std::string& text, int& line_out, ErrKind& kind_out) {
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("ERROR ", 0) != 0) continue;
    int lineno = 0;
    std::string kind;
    std::istringstream ls(line.substr(6));
    std::string field;
    bool have_line = false, have_kind = false;
    while (ls >> field) {
      if (field.rfind("line=", 0) == 0) {
        lineno = std::atoi(field.c_str() + 5);
        have_line = true;
      } else if (field.rfind("kind=", 0) == 0) {
        kind = field.substr(5);
        have_kind = true;
      }
    }
    if (have_line) {
      line_out = lineno;
      kind_out = have_kind ? err_kind_from_string(kind).value_or(ErrKind::EngineCrash)
                           : ErrKind::EngineCrash;
      return true;
    }
  }
  return false;
}

bool has_timeout_marker(const std::string& text) {
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (line.rfind("TIMEOUT", 0) == 0) return true;
  return false;
}

}  // namespace

ExecResult run_external(const EngineAdapter& adapter, const std::string& program_path,
                        double timeout_s) {
  if (adapter.in_process) {
    ExecResult r = run_reference(program_path, timeout_s);
    r.engine = adapter.name;
    return r;
  }
  ExecResult r;
  r.engine = adapter.name;
  std::vector<std::string> argv;
  argv.reserve(adapter.command.size());
  char ts[32];
  std::snprintf(ts, sizeof ts, "%g", timeout_s);
  for (const auto& part : adapter.command)
    argv.push_back(substitute(substitute(part, "{program}", program_path), "{timeout_s}", ts));

  auto t0 = std::chrono::steady_clock::now();
  SpawnResult sp = run_process(argv, timeout_s);
  r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  r.raw = sp.out + sp.err;

  if (sp.timed_out || has_timeout_marker(sp.err) || has_timeout_marker(sp.out)) {
    r.outcome.k = Outcome::K::Timeout;
    return r;
  }
  int line = 0;
  ErrKind kind = ErrKind::EngineCrash;
  if (find_error_marker(sp.err, line, kind) || find_error_marker(sp.out, line, kind)) {
    r.outcome.k = Outcome::K::Abnormal;
    r.outcome.err = kind;
    r.outcome.line = line;
    return r;
  }
  if (sp.exit_code != 0) {
    r.outcome.k = Outcome::K::Abnormal;
    r.outcome.err = ErrKind::EngineCrash;
    r.outcome.line = 0;
    r.outcome.msg = "engine exited with status " + std::to_string(sp.exit_code);
    return r;
  }
  r.outcome.k = Outcome::K::Success;
  std::istringstream ss(sp.out);
  std::string line_text;
  while (std::getline(ss, line_text)) {
    SnapshotRow row;
    if (parse_snapshot_line(line_text, row)) r.outcome.rows.push_back(std::move(row));
  }
  return r;
}

// ---------------------------------------------------------------------------
// The consistency measure
// ---------------------------------------------------------------------------

namespace {

bool values_equal(const std::string& a, const std::string& b, double rel_tol) {
  if (a == b) return true;
  if (rel_tol <= 0) return false;
  char* end_a = nullptr;
  char* end_b = nullptr;
  double da = std::strtod(a.c_str(), &end_a);
  double db = std::strtod(b.c_str(), &end_b);
  if (end_a != a.c_str() + a.size() || end_b != b.c_str() + b.size() || a.empty() || b.empty())
    return false;
  double scale = std::max(std::abs(da), std::abs(db));
  if (scale == 0) return true;
  return std::abs(da - db) <= rel_tol * scale;
}

bool fb_internal(const std::string& name) {
  size_t first = name.find('.');
  return first != std::string::npos && name.find('.', first + 1) != std::string::npos;
}

}  // namespace

Verdict compare(const ExecResult& a, const ExecResult& b, double float_rel_tol,
                bool program_vars_only) {
  using K = Outcome::K;
  Verdict v;
  K ka = a.outcome.k, kb = b.outcome.k;

  if (ka == K::Timeout && kb == K::Timeout) {
    v.k = Verdict::K::BothTimeout;
    return v;
  }
  if (ka == K::Timeout || kb == K::Timeout) {
    v.k = Verdict::K::Inconsistent;
    v.reason = Verdict::Reason::OneTimeout;
    v.which = ka == K::Timeout ? a.engine : b.engine;
    return v;
  }
  if (ka == K::Abnormal && kb == K::Abnormal) {
    v.line_a = a.outcome.line;
    v.line_b = b.outcome.line;
    if (a.outcome.line == b.outcome.line) {
      v.k = Verdict::K::Consistent;
    } else {
      v.k = Verdict::K::Inconsistent;
      v.reason = Verdict::Reason::DifferentErrorStatement;
    }
    return v;
  }
  if (ka != kb) {
    v.k = Verdict::K::Inconsistent;
    v.reason = Verdict::Reason::OneFailed;
    v.which = ka == K::Abnormal ? a.engine : b.engine;
    return v;
  }

  // both success: compare the union of qualified names
  std::map<std::string, std::pair<std::string, std::string>> ma, mb;
  for (const auto& r : a.outcome.rows)
    if (!program_vars_only || !fb_internal(r.name)) ma[r.name] = {r.type, r.value};
  for (const auto& r : b.outcome.rows)
    if (!program_vars_only || !fb_internal(r.name)) mb[r.name] = {r.type, r.value};
  for (const auto& [name, tv] : ma) {
    auto it = mb.find(name);
    if (it == mb.end() || it->second.first != tv.first ||
        !values_equal(it->second.second, tv.second, float_rel_tol))
      v.names.push_back(name);
  }
  for (const auto& [name, tv] : mb)
    if (!ma.count(name)) v.names.push_back(name);
  if (v.names.empty()) {
    v.k = Verdict::K::Consistent;
  } else {
    v.k = Verdict::K::Inconsistent;
    v.reason = Verdict::Reason::ValueMismatch;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Campaigns
// ---------------------------------------------------------------------------

CampaignReport campaign(const std::vector<std::string>& seed_paths, const MutationPlan& plan,
                        const EngineAdapter& adapter, int parallelism,
                        const std::string& workdir) {
  std::vector<SourceUnit> seeds;
  for (const auto& p : seed_paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrKind::IOError, "cannot read seed '" + p + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    seeds.push_back(parse_source(buf.str()));
  }

  std::vector<std::string> programs = seed_paths;
  CampaignReport report;
  if (plan.rounds > 0) {
    fs::create_directories(workdir);
    std::vector<Mutant> mutants = mutate_program(seeds, plan, parallelism);
    report.mutants_generated = mutants.size();
    size_t i = 0;
    for (const auto& m : mutants) {
      char name[64];
      std::snprintf(name, sizeof name, "m%d_%06zu.st", m.round, i++);
      fs::path path = fs::path(workdir) / name;
      std::ofstream out(path, std::ios::binary);
      out << pretty_print(m.unit);
      programs.push_back(path.string());
    }
  }

  report.rows.resize(programs.size());
  std::exception_ptr fatal;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(parallelism > 1 ? parallelism : 1) \
    if (parallelism > 1)
#endif
  for (long long i = 0; i < static_cast<long long>(programs.size()); ++i) {
    CampaignRow& row = report.rows[static_cast<size_t>(i)];
    row.program = programs[static_cast<size_t>(i)];
    try {
      row.ref = run_reference(row.program, adapter.timeout_s);
      row.ext = run_external(adapter, row.program, adapter.timeout_s);
      row.verdict = compare(row.ref, row.ext, adapter.float_rel_tol,
                            adapter.program_vars_only);
    } catch (const Error& e) {
      if (e.kind == ErrKind::AdapterError) {
        // the engine itself is broken; abort the whole campaign
#ifdef _OPENMP
#pragma omp critical
#endif
        {
          if (!fatal) fatal = std::current_exception();
        }
      } else {
        row.ref.outcome.k = Outcome::K::Abnormal;
        row.ref.outcome.err = e.kind;
        row.ref.outcome.msg = e.what();
        row.ext.outcome.k = Outcome::K::Abnormal;
        row.ext.outcome.err = e.kind;
        row.verdict.k = Verdict::K::Consistent;  // both unusable the same way
      }
    }
  }
  if (fatal) std::rethrow_exception(fatal);

  CampaignSummary& s = report.summary;
  s.programs = report.rows.size();
  for (const auto& row : report.rows) {
    using K = Outcome::K;
    K ka = row.ref.outcome.k, kb = row.ext.outcome.k;
    if (ka == K::Success) ++s.ref_completed;
    if (kb == K::Success) ++s.ext_completed;
    switch (row.verdict.k) {
      case Verdict::K::Consistent: ++s.consistent; break;
      case Verdict::K::Inconsistent: ++s.inconsistent; break;
      case Verdict::K::BothTimeout: ++s.both_timeout; break;
    }
    if (ka == K::Success && kb == K::Success) {
      if (row.verdict.k == Verdict::K::Consistent) ++s.both_success_equal;
      else ++s.both_success_different;
    } else if (ka == K::Success && kb != K::Success) {
      ++s.ref_only_completes;
    } else if (kb == K::Success && ka != K::Success) {
      ++s.ext_only_completes;
    } else if (ka == K::Abnormal && kb == K::Abnormal) {
      if (row.verdict.k == Verdict::K::Consistent) ++s.both_abnormal_same;
      else ++s.both_abnormal_different;
    }
    if (row.verdict.reason == Verdict::Reason::OneTimeout) ++s.one_timeout;
  }
  return report;
}

std::string report_jsonl(const CampaignReport& report) {
  std::string out;
  for (const auto& row : report.rows) {
    nlohmann::ordered_json j;
    j["program"] = row.program;
    j["verdict"] = to_string(row.verdict.k);
    j["reason"] = to_string(row.verdict.reason);
    if (!row.verdict.names.empty()) j["names"] = row.verdict.names;
    if (row.verdict.line_a >= 0) {
      j["line_ref"] = row.verdict.line_a;
      j["line_ext"] = row.verdict.line_b;
    }
    if (!row.verdict.which.empty()) j["which"] = row.verdict.which;
    j["wall_ms"] = {row.ref.wall_ms, row.ext.wall_ms};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string summary_text(const CampaignSummary& s) {
  std::ostringstream out;
  out << "programs:                      " << s.programs << "\n"
      << "reference completed:           " << s.ref_completed << "\n"
      << "external completed:            " << s.ext_completed << "\n"
      << "both success, equal:           " << s.both_success_equal << "\n"
      << "both success, different:       " << s.both_success_different << "\n"
      << "reference only completes:      " << s.ref_only_completes << "\n"
      << "external only completes:       " << s.ext_only_completes << "\n"
      << "both abnormal, same stmt:      " << s.both_abnormal_same << "\n"
      << "both abnormal, different stmt: " << s.both_abnormal_different << "\n"
      << "one-sided timeout:             " << s.one_timeout << "\n"
      << "both timeout (excluded):       " << s.both_timeout << "\n"
      << "verdicts: " << s.consistent << " consistent, " << s.inconsistent
      << " inconsistent, " << s.both_timeout << " both-timeout\n";
  return out.str();
}

}  // namespace stref
