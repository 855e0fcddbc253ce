// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "stref/difftest.hpp"
#include "stref/subprocess.hpp"

using namespace stref;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / "stref-difftest-tests";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p;
}

ExecResult mk(Outcome::K k, int line = 0,
              std::vector<SnapshotRow> rows = {}, const char* engine = "x") {
  ExecResult r;
  r.engine = engine;
  r.outcome.k = k;
  r.outcome.line = line;
  r.outcome.rows = std::move(rows);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// compare(): the consistency table
// ---------------------------------------------------------------------------

TEST_CASE("compare: the four table cells") {
  // Q = Q'
  auto a = mk(Outcome::K::Success, 0, {{"a", "INT", "1"}});
  auto b = mk(Outcome::K::Success, 0, {{"a", "INT", "1"}});
  CHECK(compare(a, b).k == Verdict::K::Consistent);

  // Q != Q'
  auto b2 = mk(Outcome::K::Success, 0, {{"a", "INT", "2"}});
  Verdict v = compare(a, b2);
  CHECK(v.k == Verdict::K::Inconsistent);
  CHECK(v.reason == Verdict::Reason::ValueMismatch);
  REQUIRE(v.names.size() == 1);
  CHECK(v.names[0] == "a");

  // I = I'
  CHECK(compare(mk(Outcome::K::Abnormal, 7), mk(Outcome::K::Abnormal, 7)).k ==
        Verdict::K::Consistent);

  // success vs abnormal
  Verdict off = compare(a, mk(Outcome::K::Abnormal, 7, {}, "ext"));
  CHECK(off.k == Verdict::K::Inconsistent);
  CHECK(off.reason == Verdict::Reason::OneFailed);
  CHECK(off.which == "ext");
}

TEST_CASE("compare: exhaustive 3x3 outcome-kind matrix") {
  Outcome::K kinds[] = {Outcome::K::Success, Outcome::K::Abnormal, Outcome::K::Timeout};
  for (auto ka : kinds) {
    for (auto kb : kinds) {
      auto a = mk(ka, 3, {{"a", "INT", "1"}}, "ref");
      auto b = mk(kb, 3, {{"a", "INT", "1"}}, "ext");
      Verdict v = compare(a, b);
      if (ka == Outcome::K::Timeout && kb == Outcome::K::Timeout) {
        CHECK(v.k == Verdict::K::BothTimeout);
      } else if (ka == Outcome::K::Timeout || kb == Outcome::K::Timeout) {
        CHECK(v.k == Verdict::K::Inconsistent);
        CHECK(v.reason == Verdict::Reason::OneTimeout);
        CHECK(v.which == (ka == Outcome::K::Timeout ? "ref" : "ext"));
      } else if (ka != kb) {
        CHECK(v.k == Verdict::K::Inconsistent);
        CHECK(v.reason == Verdict::Reason::OneFailed);
      } else {
        CHECK(v.k == Verdict::K::Consistent);
      }
    }
  }
}

TEST_CASE("compare: different abnormal statements") {
  Verdict v = compare(mk(Outcome::K::Abnormal, 7), mk(Outcome::K::Abnormal, 9));
  CHECK(v.k == Verdict::K::Inconsistent);
  CHECK(v.reason == Verdict::Reason::DifferentErrorStatement);
  CHECK(v.line_a == 7);
  CHECK(v.line_b == 9);
}

TEST_CASE("compare: missing names count as mismatches on either side") {
  auto a = mk(Outcome::K::Success, 0, {{"a", "INT", "1"}, {"b", "INT", "2"}});
  auto b = mk(Outcome::K::Success, 0, {{"a", "INT", "1"}, {"c", "INT", "3"}});
  Verdict v = compare(a, b);
  CHECK(v.k == Verdict::K::Inconsistent);
  CHECK(v.names == std::vector<std::string>{"b", "c"});
}

TEST_CASE("compare: type text participates in row equality") {
  auto a = mk(Outcome::K::Success, 0, {{"a", "INT", "1"}});
  auto b = mk(Outcome::K::Success, 0, {{"a", "DINT", "1"}});
  CHECK(compare(a, b).k == Verdict::K::Inconsistent);
}

TEST_CASE("compare: optional float tolerance") {
  auto a = mk(Outcome::K::Success, 0, {{"r", "REAL", "1.0"}});
  auto b = mk(Outcome::K::Success, 0, {{"r", "REAL", "1.0000001"}});
  CHECK(compare(a, b).k == Verdict::K::Inconsistent);          // default: exact
  CHECK(compare(a, b, 1e-5).k == Verdict::K::Consistent);      // tolerant
  auto s = mk(Outcome::K::Success, 0, {{"s", "STRING", "'x'"}});
  auto s2 = mk(Outcome::K::Success, 0, {{"s", "STRING", "'y'"}});
  CHECK(compare(s, s2, 1e-5).k == Verdict::K::Inconsistent);   // non-floats stay exact
}

TEST_CASE("compare: program_vars_only drops FB internals") {
  auto a = mk(Outcome::K::Success, 0,
              {{"MAIN.a", "INT", "1"}, {"MAIN.fb.n", "INT", "5"}});
  auto b = mk(Outcome::K::Success, 0,
              {{"MAIN.a", "INT", "1"}, {"MAIN.fb.n", "INT", "9"}});
  CHECK(compare(a, b).k == Verdict::K::Inconsistent);
  CHECK(compare(a, b, 0.0, true).k == Verdict::K::Consistent);
}

// ---------------------------------------------------------------------------
// Engine runs
// ---------------------------------------------------------------------------

TEST_CASE("run_reference: success, abnormal, timeout, io error") {
  fs::path ok = write_temp("ok.st",
                           "PROGRAM MAIN VAR a : INT; END_VAR a := 1; END_PROGRAM\n");
  ExecResult r = run_reference(ok.string(), 5);
  CHECK(r.outcome.k == Outcome::K::Success);
  REQUIRE(r.outcome.rows.size() == 1);
  CHECK(r.outcome.rows[0].name == "MAIN.a");
  CHECK(r.wall_ms < 1000);

  fs::path bad = write_temp("bad.st", "PROGRAM MAIN\nVAR a : INT;\nEND_VAR\na := 1 / 0;\n"
                                      "END_PROGRAM\n");
  ExecResult rb = run_reference(bad.string(), 5);
  CHECK(rb.outcome.k == Outcome::K::Abnormal);
  CHECK(rb.outcome.line == 4);

  fs::path spin = write_temp("spin.st", "PROGRAM MAIN WHILE TRUE DO END_WHILE; END_PROGRAM\n");
  ExecResult rt = run_reference(spin.string(), 0.3);
  CHECK(rt.outcome.k == Outcome::K::Timeout);

  CHECK_THROWS_AS(run_reference("/nonexistent/file.st", 1), Error);
}

TEST_CASE("run_external: real child processes") {
  fs::path ok = write_temp("ok.st",
                           "PROGRAM MAIN VAR a : INT; END_VAR a := 1; END_PROGRAM\n");

  EngineAdapter stref_adapter;
  stref_adapter.name = "stref-cli";
  stref_adapter.command = {STREF_BIN_PATH, "run", "{program}", "--timeout", "{timeout_s}"};
  ExecResult r = run_external(stref_adapter, ok.string(), 5);
  CHECK(r.outcome.k == Outcome::K::Success);
  REQUIRE(r.outcome.rows.size() == 1);
  CHECK(r.outcome.rows[0].name == "MAIN.a");
  CHECK(r.outcome.rows[0].value == "1");

  // abnormal marker parsing (line + kind)
  fs::path bad = write_temp("bad2.st", "PROGRAM MAIN\nVAR a : INT;\nEND_VAR\na := 1 / 0;\n"
                                       "END_PROGRAM\n");
  ExecResult rb = run_external(stref_adapter, bad.string(), 5);
  CHECK(rb.outcome.k == Outcome::K::Abnormal);
  CHECK(rb.outcome.line == 4);
  CHECK(rb.outcome.err == ErrKind::DivisionByZero);

  // marker echoed by a plain shell command
  EngineAdapter echoer;
  echoer.command = {"/bin/sh", "-c", "echo 'ERROR line=5 kind=DivisionByZero'"};
  ExecResult re = run_external(echoer, ok.string(), 5);
  CHECK(re.outcome.k == Outcome::K::Abnormal);
  CHECK(re.outcome.line == 5);

  // snapshot echoed by a plain shell command
  EngineAdapter fake;
  fake.command = {"/bin/sh", "-c", "echo 'MAIN.a : INT = 1'"};
  ExecResult rf = run_external(fake, ok.string(), 5);
  CHECK(rf.outcome.k == Outcome::K::Success);
  REQUIRE(rf.outcome.rows.size() == 1);

  // overrun is killed and reported as a timeout
  EngineAdapter sleeper;
  sleeper.command = {"/bin/sh", "-c", "sleep 30"};
  auto t0 = std::chrono::steady_clock::now();
  ExecResult rs = run_external(sleeper, ok.string(), 0.3);
  auto elapsed = std::chrono::steady_clock::now() - t0;
  CHECK(rs.outcome.k == Outcome::K::Timeout);
  CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 10);

  // crash without a marker
  EngineAdapter crasher;
  crasher.command = {"/bin/sh", "-c", "exit 3"};
  ExecResult rc = run_external(crasher, ok.string(), 5);
  CHECK(rc.outcome.k == Outcome::K::Abnormal);
  CHECK(rc.outcome.err == ErrKind::EngineCrash);
  CHECK(rc.outcome.line == 0);

  // unstartable commands raise AdapterError
  EngineAdapter missing;
  missing.command = {"/nonexistent-engine-binary"};
  CHECK_THROWS_AS(run_external(missing, ok.string(), 1), Error);
}

TEST_CASE("adapter config: json file parsing") {
  fs::path cfg = write_temp("adapter.json", R"({
  "name": "mock",
  "command": ["/bin/engine", "run", "{program}"],
  "timeout_s": 3.5,
  "float_rel_tol": 0.001,
  "program_vars_only": true
})");
  EngineAdapter a = EngineAdapter::from_json_file(cfg.string());
  CHECK(a.name == "mock");
  CHECK(a.command.size() == 3);
  CHECK(a.timeout_s == 3.5);
  CHECK(a.float_rel_tol == 0.001);
  CHECK(a.program_vars_only);

  fs::path cfg2 = write_temp("adapter2.json", R"({"command": "@self"})");
  CHECK(EngineAdapter::from_json_file(cfg2.string()).in_process);

  fs::path cfg3 = write_temp("adapter3.json", R"({"name": "x"})");
  CHECK_THROWS_AS(EngineAdapter::from_json_file(cfg3.string()), Error);
  CHECK_THROWS_AS(EngineAdapter::from_json_file("/nonexistent.json"), Error);
}

// ---------------------------------------------------------------------------
// Campaigns
// ---------------------------------------------------------------------------

TEST_CASE("campaign: self-comparison over generated mutants is consistent") {
  fs::path seed = write_temp("seed.st", R"(PROGRAM MAIN
VAR a : INT; b : INT; f : BOOL; END_VAR
  a := a + 1;
  b := a * 2;
  f := a > b;
END_PROGRAM
)");
  MutationPlan plan;
  plan.rng_seed = 4;
  plan.rounds = 1;
  plan.mutants_per_seed = 2;
  fs::path work = fs::temp_directory_path() / "stref-difftest-tests" / "camp1";
  CampaignReport report = campaign({seed.string()}, plan, EngineAdapter::self(), 1,
                                   work.string());
  CHECK(report.rows.size() == 3);  // seed + 2 mutants
  CHECK(report.mutants_generated == 2);
  for (const auto& row : report.rows) {
    CAPTURE(row.program);
    CHECK(row.verdict.k != Verdict::K::Inconsistent);
  }
  CHECK(report.summary.programs == 3);
  CHECK(report.summary.consistent + report.summary.both_timeout == 3);
  CHECK(report.summary.inconsistent == 0);

  // category counts partition the programs
  const auto& s = report.summary;
  CHECK(s.both_success_equal + s.both_success_different + s.ref_only_completes +
            s.ext_only_completes + s.both_abnormal_same + s.both_abnormal_different +
            s.both_timeout ==
        s.programs);
}

TEST_CASE("campaign: the buggy mock is flagged") {
  fs::path mod = write_temp("mod.st",
                            "PROGRAM MAIN\nVAR a : INT;\nEND_VAR\na := -7 MOD 3;\n"
                            "END_PROGRAM\n");
  EngineAdapter buggy;
  buggy.name = "mockplc";
  buggy.command = {MOCKPLC_BIN_PATH, "--profile", "buggy", "{program}"};
  buggy.timeout_s = 5;
  MutationPlan plan;
  plan.rounds = 0;  // seeds only
  fs::path work = fs::temp_directory_path() / "stref-difftest-tests" / "camp2";
  CampaignReport report = campaign({mod.string()}, plan, buggy, 1, work.string());
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].verdict.k == Verdict::K::Inconsistent);
  CHECK(report.rows[0].verdict.reason == Verdict::Reason::ValueMismatch);
  CHECK(report.summary.both_success_different == 1);
}

TEST_CASE("campaign: parallel rows match serial rows") {
  fs::path seed = write_temp("seed2.st", R"(PROGRAM MAIN
VAR i : INT; acc : DINT; END_VAR
  FOR i := 1 TO 20 DO acc := acc + i; END_FOR;
END_PROGRAM
)");
  MutationPlan plan;
  plan.rng_seed = 11;
  plan.rounds = 1;
  plan.mutants_per_seed = 6;
  fs::path w1 = fs::temp_directory_path() / "stref-difftest-tests" / "camp3a";
  fs::path w2 = fs::temp_directory_path() / "stref-difftest-tests" / "camp3b";
  CampaignReport serial = campaign({seed.string()}, plan, EngineAdapter::self(), 1,
                                   w1.string());
  CampaignReport parallel = campaign({seed.string()}, plan, EngineAdapter::self(), 4,
                                     w2.string());
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].verdict.k == parallel.rows[i].verdict.k);
    CHECK(fs::path(serial.rows[i].program).filename() ==
          fs::path(parallel.rows[i].program).filename());
  }
}

TEST_CASE("campaign: the reference is self-consistent over the whole corpus") {
  fs::path programs = fs::path(CORPUS_DIR) / "programs";
  if (!fs::exists(programs)) return;
  std::vector<std::string> seeds;
  for (const auto& e : fs::directory_iterator(programs))
    if (e.path().extension() == ".st") seeds.push_back(e.path().string());
  std::sort(seeds.begin(), seeds.end());
  REQUIRE(seeds.size() >= 30);
  MutationPlan plan;
  plan.rounds = 0;
  fs::path work = fs::temp_directory_path() / "stref-difftest-tests" / "corpus-self";
  CampaignReport report = campaign(seeds, plan, EngineAdapter::self(), 1, work.string());
  for (const auto& row : report.rows) {
    CAPTURE(row.program);
    CHECK(row.verdict.k != Verdict::K::Inconsistent);
  }
}

TEST_CASE("report: jsonl rows and summary text") {
  CampaignReport report;
  CampaignRow row;
  row.program = "p.st";
  row.verdict.k = Verdict::K::Inconsistent;
  row.verdict.reason = Verdict::Reason::ValueMismatch;
  row.verdict.names = {"MAIN.a"};
  report.rows.push_back(std::move(row));
  report.summary.programs = 1;
  report.summary.inconsistent = 1;
  std::string jsonl = report_jsonl(report);
  CHECK(jsonl.find("\"program\":\"p.st\"") != std::string::npos);
  CHECK(jsonl.find("\"verdict\":\"Inconsistent\"") != std::string::npos);
  CHECK(jsonl.find("\"names\":[\"MAIN.a\"]") != std::string::npos);
  CHECK(summary_text(report.summary).find("1 inconsistent") != std::string::npos);
}

TEST_CASE("cli: exit codes and markers through the adapter protocol") {
  fs::path ok = write_temp("cli_ok.st",
                           "PROGRAM MAIN VAR a : INT; END_VAR a := 1; END_PROGRAM\n");
  fs::path spin = write_temp("cli_spin.st",
                             "PROGRAM MAIN WHILE TRUE DO END_WHILE; END_PROGRAM\n");

  // usage error is 64
  SpawnResult usage = run_process({STREF_BIN_PATH, "no-such-command"}, 10);
  CHECK(usage.exit_code == 64);

  // missing entry program: ERROR marker with EntryNotFound, exit 1
  SpawnResult entry = run_process({STREF_BIN_PATH, "run", ok.string(), "--entry", "P2"}, 10);
  CHECK(entry.exit_code == 1);
  CHECK(entry.err.find("kind=EntryNotFound") != std::string::npos);

  // the CLI's own timeout: exit 124 plus a TIMEOUT marker the adapter
  // parser classifies as a timeout outcome
  EngineAdapter self_cli;
  self_cli.command = {STREF_BIN_PATH, "run", "{program}", "--timeout", "0.2"};
  ExecResult rt = run_external(self_cli, spin.string(), 10);
  CHECK(rt.outcome.k == Outcome::K::Timeout);
  SpawnResult direct = run_process({STREF_BIN_PATH, "run", spin.string(), "--timeout", "0.2"},
                                   10);
  CHECK(direct.exit_code == 124);
  CHECK(direct.err.find("TIMEOUT") != std::string::npos);
}

TEST_CASE("subprocess: environment is reduced to the allow-list") {
  setenv("STREF_SECRET_TEST_VAR", "leak", 1);
  SpawnResult r = run_process({"/bin/sh", "-c", "echo [$STREF_SECRET_TEST_VAR]"}, 5);
  unsetenv("STREF_SECRET_TEST_VAR");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("leak") == std::string::npos);
  SpawnResult path = run_process({"/bin/sh", "-c", "echo [$PATH]"}, 5);
  CHECK(path.out.find("[]") == std::string::npos);  // PATH survives
}
