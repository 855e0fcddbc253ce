// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Run through ctest or directly:
//
//   ./build/tests/acceptance
//
// The corpus location and engine binaries are baked in at configure time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "generators.hpp"
#include "stref/builtins.hpp"
#include "stref/difftest.hpp"
#include "stref/interp.hpp"
#include "stref/mutate.hpp"
#include "stref/ops.hpp"
#include "stref/parser.hpp"
#include "stref/printer.hpp"
#include "stref/rng.hpp"

using namespace stref;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// big-integer oracle (arithmetic route, no bit twiddling)
int64_t oracle_wrap(int bits, bool is_signed, __int128 x) {
  __int128 m = static_cast<__int128>(1) << bits;
  __int128 r = ((x % m) + m) % m;
  if (is_signed && r >= m / 2) r -= m;
  return static_cast<int64_t>(r);
}

// ---------------------------------------------------------------------------
// 1. corpus vs goldens, plus a mechanical feature-coverage scan
// ---------------------------------------------------------------------------

struct FeatureScan {
  std::set<std::string> seen;

  void visit_expr(const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, TypedLitE>) {
            seen.insert("typed-literal");
          } else if constexpr (std::is_same_v<T, UnaryE>) {
            visit_expr(*n.operand);
          } else if constexpr (std::is_same_v<T, BinaryE>) {
            visit_expr(*n.lhs);
            visit_expr(*n.rhs);
          } else if constexpr (std::is_same_v<T, CallE>) {
            visit_expr(*n.callee);
            for (const auto& a : n.args) visit_expr(*a.value);
          } else if constexpr (std::is_same_v<T, MemberE>) {
            visit_expr(*n.base);
          } else if constexpr (std::is_same_v<T, IndexE>) {
            visit_expr(*n.base);
            for (const auto& i : n.indices) visit_expr(*i);
          } else if constexpr (std::is_same_v<T, AggregateE>) {
            for (const auto& a : n.fields) visit_expr(*a.value);
          }
        },
        e.node);
  }

  void visit_stmts(const StmtList& list) {
    for (const auto& s : list) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExprS>) {
              seen.insert("stmt-expression");
              visit_expr(*n.expr);
            } else if constexpr (std::is_same_v<T, AssignS>) {
              seen.insert("stmt-assign");
              visit_expr(*n.lhs);
              visit_expr(*n.rhs);
            } else if constexpr (std::is_same_v<T, IfS>) {
              seen.insert("stmt-if");
              visit_expr(*n.cond);
              visit_stmts(n.then_body);
              for (const auto& a : n.elsifs) {
                visit_expr(*a.cond);
                visit_stmts(a.body);
              }
              if (n.else_body) visit_stmts(*n.else_body);
            } else if constexpr (std::is_same_v<T, CaseS>) {
              seen.insert("stmt-case");
              visit_expr(*n.scrutinee);
              for (const auto& arm : n.arms) visit_stmts(arm.body);
              if (n.else_body) visit_stmts(*n.else_body);
            } else if constexpr (std::is_same_v<T, WhileS>) {
              seen.insert("stmt-while");
              visit_expr(*n.cond);
              visit_stmts(n.body);
            } else if constexpr (std::is_same_v<T, ForS>) {
              seen.insert("stmt-for");
              visit_stmts(n.body);
            } else if constexpr (std::is_same_v<T, RepeatS>) {
              seen.insert("stmt-repeat");
              visit_stmts(n.body);
              visit_expr(*n.until);
            } else if constexpr (std::is_same_v<T, ReturnS>) {
              seen.insert("stmt-return");
            } else {
              seen.insert("stmt-exit");
            }
          },
          s->node);
    }
  }

  void visit_type(const TypeExpr& t) {
    switch (t.k) {
      case TypeExpr::K::Elementary:
        seen.insert(std::string("type-") + kind_keyword(t.elem));
        break;
      case TypeExpr::K::String:
        seen.insert(t.wide ? "type-WSTRING" : "type-STRING");
        break;
      case TypeExpr::K::Array:
        seen.insert(t.ranges.size() > 1 ? "array-multi" : "array-1d");
        visit_type(*t.element);
        break;
      case TypeExpr::K::User:
        seen.insert("type-user");
        break;
    }
  }

  void visit_unit(const SourceUnit& u) {
    for (const auto& td : u.type_decls) {
      if (std::holds_alternative<EnumDecl>(td)) {
        seen.insert("decl-enum");
      } else {
        seen.insert("decl-struct");
        for (const auto& f : std::get<StructDecl>(td).fields) visit_type(f.type);
      }
    }
    for (const auto& pou : u.pous) {
      switch (pou.kind) {
        case PouKind::Function: seen.insert("pou-function"); break;
        case PouKind::FunctionBlock: seen.insert("pou-function-block"); break;
        case PouKind::Program: seen.insert("pou-program"); break;
      }
      for (const auto& sec : pou.sections) {
        seen.insert(std::string("section-") + to_string(sec.kind));
        if (sec.constant) seen.insert("section-CONSTANT");
        for (const auto& e : sec.entries) {
          visit_type(e.type);
          if (e.init) visit_expr(*e.init);
        }
      }
      visit_stmts(pou.body);
    }
  }
};

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  fs::path programs = fs::path(CORPUS_DIR) / "programs";
  fs::path golden = fs::path(CORPUS_DIR) / "golden";
  size_t total = 0, matched = 0;
  std::string first_bad;
  FeatureScan scan;

  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(programs))
    if (e.path().extension() == ".st") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  for (const auto& p : files) {
    ++total;
    SourceUnit unit;
    try {
      unit = parse_source(slurp(p));
    } catch (const Error&) {
      if (first_bad.empty()) first_bad = p.filename().string() + " (parse error)";
      continue;
    }
    scan.visit_unit(unit);
    Outcome out = run(unit, "MAIN", 10 * kFuelPerSecond);
    std::string got = out.k == Outcome::K::Success ? render_rows(out.rows) : "<abnormal>";
    std::string want = slurp(golden / (p.stem().string() + ".golden"));
    if (got == want) {
      ++matched;
    } else if (first_bad.empty()) {
      first_bad = p.filename().string();
    }
  }

  const char* required[] = {
      "pou-function", "pou-function-block", "pou-program",
      "section-VAR", "section-VAR_INPUT", "section-VAR_OUTPUT", "section-VAR_IN_OUT",
      "section-VAR_TEMP", "section-VAR_GLOBAL", "section-VAR_EXTERNAL", "section-CONSTANT",
      "type-SINT", "type-INT", "type-DINT", "type-LINT",
      "type-USINT", "type-UINT", "type-UDINT", "type-ULINT",
      "type-REAL", "type-LREAL", "type-BOOL",
      "type-BYTE", "type-WORD", "type-DWORD",
      "type-STRING", "type-WSTRING",
      "type-TIME", "type-DATE", "type-TIME_OF_DAY", "type-DATE_AND_TIME",
      "decl-enum", "decl-struct", "array-1d", "array-multi", "type-user",
      "stmt-assign", "stmt-expression", "stmt-if", "stmt-case", "stmt-while", "stmt-for",
      "stmt-repeat", "stmt-exit", "stmt-return", "typed-literal",
  };
  std::string missing;
  for (const char* r : required)
    if (!scan.seen.count(r)) missing += std::string(r) + " ";

  double dt = seconds_since(t0);
  bool pass = total >= 30 && matched == total && missing.empty() && dt < 10.0;
  std::ostringstream detail;
  detail << matched << "/" << total << " goldens exact";
  if (!missing.empty()) detail << ", MISSING features: " << missing;
  else detail << ", all feature axes covered";
  if (!first_bad.empty()) detail << ", first mismatch: " << first_bad;
  detail << ", " << dt << "s";
  report(1, "corpus execution matches the golden snapshots", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 2. MOD semantics
// ---------------------------------------------------------------------------

void criterion_2() {
  SourceUnit unit = parse_source(
      "PROGRAM MAIN VAR a : INT; END_VAR a := -7 MOD 3; END_PROGRAM");
  Outcome out = run(unit);
  bool pass = out.k == Outcome::K::Success && out.rows.size() == 1 &&
              out.rows[0].value == "-1";

  uint64_t checked = 0;
  for (int64_t a = -1000; a <= 1000 && pass; ++a) {
    for (int64_t b = -1000; b <= 1000; ++b) {
      if (b == 0) continue;
      int64_t q = arith(BinOp::Div, make_int(TypeKind::Dint, a),
                        make_int(TypeKind::Dint, b)).i();
      int64_t m = arith(BinOp::Mod, make_int(TypeKind::Dint, a),
                        make_int(TypeKind::Dint, b)).i();
      // big-integer oracle route
      __int128 qo = static_cast<__int128>(a) / b;
      __int128 mo = static_cast<__int128>(a) % b;
      if (q != static_cast<int64_t>(qo) || m != static_cast<int64_t>(mo) ||
          q * b + m != a || std::abs(m) >= std::abs(b) ||
          !(m == 0 || (m < 0) == (a < 0))) {
        pass = false;
        break;
      }
      ++checked;
    }
  }
  report(2, "(-7) MOD 3 = -1 and the Euclidean identity holds", pass,
         std::to_string(checked) + " (a,b) pairs checked exactly");
}

// ---------------------------------------------------------------------------
// 3. overflow truncation
// ---------------------------------------------------------------------------

void criterion_3() {
  struct K {
    TypeKind kind;
    int bits;
    bool s;
  };
  const K kinds[] = {{TypeKind::Sint, 8, true},    {TypeKind::Int, 16, true},
                     {TypeKind::Dint, 32, true},   {TypeKind::Lint, 64, true},
                     {TypeKind::Usint, 8, false},  {TypeKind::Uint, 16, false},
                     {TypeKind::Udint, 32, false}, {TypeKind::Ulint, 64, false}};
  Rng rng(31337);
  bool pass = true;
  uint64_t checked = 0;
  std::string detail;
  for (const auto& k : kinds) {
    for (int i = 0; i < 10000 && pass; ++i) {
      int64_t a = wrap_to_kind(k.kind, static_cast<int64_t>(rng.next()));
      int64_t b = wrap_to_kind(k.kind, static_cast<int64_t>(rng.next()));
      __int128 av = k.s ? static_cast<__int128>(a)
                        : static_cast<__int128>(static_cast<uint64_t>(a));
      __int128 bv = k.s ? static_cast<__int128>(b)
                        : static_cast<__int128>(static_cast<uint64_t>(b));
      BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod};
      BinOp op = ops[rng.below(5)];
      if ((op == BinOp::Div || op == BinOp::Mod) && bv == 0) continue;
      __int128 expect;
      switch (op) {
        case BinOp::Add: expect = av + bv; break;
        case BinOp::Sub: expect = av - bv; break;
        case BinOp::Mul:
          // avoid signed 128-bit overflow: only the low 64 bits matter
          expect = static_cast<int64_t>(static_cast<uint64_t>(a) *
                                        static_cast<uint64_t>(b));
          break;
        case BinOp::Div: expect = av / bv; break;
        default: expect = av % bv; break;
      }
      Value got = arith(op, make_int(k.kind, a), make_int(k.kind, b));
      int64_t want = oracle_wrap(k.bits, k.s, expect);
      if (got.kind() != k.kind || got.i() != want) {
        pass = false;
        detail = std::string("first failure on ") + kind_keyword(k.kind);
      }
      ++checked;
    }
  }
  if (pass) detail = std::to_string(checked) + " random triples match the oracle";
  report(3, "integer overflow truncates per the big-integer-then-wrap oracle", pass, detail);
}

// ---------------------------------------------------------------------------
// 4. rewriting equivalences
// ---------------------------------------------------------------------------

void criterion_4() {
  Rng rng(20240809);
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 500 && pass; ++i) {
    auto pair = testgen::case_vs_if(rng);
    Outcome a = run(parse_source(pair.a), "MAIN", 200000);
    Outcome b = run(parse_source(pair.b), "MAIN", 200000);
    if (a.k != Outcome::K::Success || b.k != Outcome::K::Success ||
        render_rows(a.rows) != render_rows(b.rows)) {
      pass = false;
      detail = "CASE/IF divergence at sample " + std::to_string(i);
    }
  }
  for (int i = 0; i < 500 && pass; ++i) {
    auto pair = testgen::repeat_vs_while(rng);
    Outcome a = run(parse_source(pair.a), "MAIN", 200000);
    Outcome b = run(parse_source(pair.b), "MAIN", 200000);
    if (a.k != Outcome::K::Success || b.k != Outcome::K::Success ||
        render_rows(a.rows) != render_rows(b.rows)) {
      pass = false;
      detail = "REPEAT/WHILE divergence at sample " + std::to_string(i);
    }
  }
  if (pass) detail = "500 CASE and 500 REPEAT programs, snapshots machine-for-machine equal";
  report(4, "CASE and REPEAT rewritings match their translations", pass, detail);
}

// ---------------------------------------------------------------------------
// 5. FB statefulness vs FUNCTION statelessness
// ---------------------------------------------------------------------------

void criterion_5() {
  bool pass = true;
  std::string detail;
  for (int n : {1, 2, 10}) {
    std::string calls;
    for (int i = 0; i < n; ++i) calls += "  c();\n";
    std::string fb = "FUNCTION_BLOCK Counter\nVAR n : INT; END_VAR\n  n := n + 1;\n"
                     "END_FUNCTION_BLOCK\nPROGRAM MAIN\nVAR c : Counter; END_VAR\n" +
                     calls + "END_PROGRAM\n";
    Outcome out = run(parse_source(fb));
    bool ok = out.k == Outcome::K::Success;
    if (ok) {
      ok = false;
      for (const auto& r : out.rows)
        if (r.name == "MAIN.c.n") ok = r.value == std::to_string(n);
    }
    if (!ok) {
      pass = false;
      detail = "Counter failed for N=" + std::to_string(n);
    }

    std::string fcalls;
    for (int i = 0; i < n; ++i) fcalls += "  last := F();\n";
    std::string fn = "FUNCTION F : INT\nVAR acc : INT; END_VAR\n  acc := acc + 1;\n"
                     "  F := acc;\nEND_FUNCTION\nPROGRAM MAIN\nVAR last : INT; END_VAR\n" +
                     fcalls + "END_PROGRAM\n";
    Outcome fout = run(parse_source(fn));
    bool fok = fout.k == Outcome::K::Success;
    if (fok) {
      fok = false;
      for (const auto& r : fout.rows)
        if (r.name == "MAIN.last") fok = r.value == "1";
    }
    if (!fok) {
      pass = false;
      detail = "stateless FUNCTION failed for N=" + std::to_string(n);
    }
  }
  if (pass) detail = "Counter n=N for N in {1,2,10}; the FUNCTION returns 1 every call";
  report(5, "FB state persists across calls, FUNCTION state does not", pass, detail);
}

// ---------------------------------------------------------------------------
// 6. error-detection parity
// ---------------------------------------------------------------------------

void criterion_6() {
  struct CaseSpec {
    const char* file;
    ErrKind kind;
    int line;
  };
  const CaseSpec cases[] = {
      {"t2_div_implicit.st", ErrKind::DivisionByZero, 7},
      {"t3_div_explicit.st", ErrKind::DivisionByZero, 5},
      {"t6_mod_zero.st", ErrKind::DivisionByZero, 5},
      {"t4_oob_implicit.st", ErrKind::IndexOutOfRange, 7},
      {"t5_oob_explicit.st", ErrKind::IndexOutOfRange, 5},
  };
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    fs::path p = fs::path(CORPUS_DIR) / "triggers" / c.file;
    Outcome out = run(parse_source(slurp(p)));
    if (out.k != Outcome::K::Abnormal || out.err != c.kind || out.line != c.line) {
      pass = false;
      detail = std::string(c.file) + ": expected " + to_string(c.kind) + " at line " +
               std::to_string(c.line) + ", got " +
               (out.k == Outcome::K::Abnormal
                    ? std::string(to_string(out.err)) + " at line " + std::to_string(out.line)
                    : std::string("success/timeout"));
      break;
    }
  }
  if (pass)
    detail = "implicit and explicit division, MOD 0 and array overflow all abort "
             "with exact statement lines";
  report(6, "division-by-zero and overflow access are detected either way", pass, detail);
}

// ---------------------------------------------------------------------------
// 7. consistency verdict table
// ---------------------------------------------------------------------------

void criterion_7() {
  auto mk = [](Outcome::K k, int line, std::vector<SnapshotRow> rows, const char* engine) {
    ExecResult r;
    r.engine = engine;
    r.outcome.k = k;
    r.outcome.line = line;
    r.outcome.rows = std::move(rows);
    return r;
  };
  bool pass = true;

  // the four table cells, verbatim
  pass &= compare(mk(Outcome::K::Success, 0, {{"a", "INT", "1"}}, "ref"),
                  mk(Outcome::K::Success, 0, {{"a", "INT", "1"}}, "ext"))
              .k == Verdict::K::Consistent;
  pass &= compare(mk(Outcome::K::Success, 0, {{"a", "INT", "1"}}, "ref"),
                  mk(Outcome::K::Success, 0, {{"a", "INT", "2"}}, "ext"))
              .k == Verdict::K::Inconsistent;
  pass &= compare(mk(Outcome::K::Abnormal, 7, {}, "ref"),
                  mk(Outcome::K::Abnormal, 7, {}, "ext"))
              .k == Verdict::K::Consistent;
  pass &= compare(mk(Outcome::K::Abnormal, 7, {}, "ref"),
                  mk(Outcome::K::Abnormal, 9, {}, "ext"))
              .k == Verdict::K::Inconsistent;

  // the exhaustive 3x3 outcome-kind matrix
  Outcome::K kinds[] = {Outcome::K::Success, Outcome::K::Abnormal, Outcome::K::Timeout};
  for (auto ka : kinds) {
    for (auto kb : kinds) {
      Verdict v = compare(mk(ka, 3, {{"a", "INT", "1"}}, "ref"),
                          mk(kb, 3, {{"a", "INT", "1"}}, "ext"));
      Verdict::K want;
      if (ka == Outcome::K::Timeout && kb == Outcome::K::Timeout)
        want = Verdict::K::BothTimeout;
      else if (ka == Outcome::K::Timeout || kb == Outcome::K::Timeout)
        want = Verdict::K::Inconsistent;
      else if (ka != kb)
        want = Verdict::K::Inconsistent;
      else
        want = Verdict::K::Consistent;
      if (v.k != want) pass = false;
      if ((ka == Outcome::K::Timeout) != (kb == Outcome::K::Timeout) &&
          v.reason != Verdict::Reason::OneTimeout)
        pass = false;
      if (ka != Outcome::K::Timeout && kb != Outcome::K::Timeout && ka != kb &&
          v.reason != Verdict::Reason::OneFailed)
        pass = false;
    }
  }
  report(7, "the verdict table covers all outcome-kind combinations", pass,
         "4 table cells plus the 3x3 matrix");
}

// ---------------------------------------------------------------------------
// 8. mutation determinism and scale law
// ---------------------------------------------------------------------------

void criterion_8() {
  bool pass = MutationPlan::expected_mutants(30, 3, 10) == 33300 &&
              MutationPlan::expected_mutants(30, 3, 10) + 30 == 33330 &&
              MutationPlan::expected_mutants(3, 2, 4) == 60;
  std::string detail = "s*(m+...+m^R): 30x3x10 -> 33300 (+30 seeds = 33330)";

  // desk-scale generation: 3 seeds, 2 rounds, 4 per seed -> 60 mutants
  auto t0 = std::chrono::steady_clock::now();
  std::vector<SourceUnit> seeds;
  fs::path programs = fs::path(CORPUS_DIR) / "programs";
  for (const char* f : {"20_for.st", "18_case.st", "31_mod_sign.st"})
    seeds.push_back(parse_source(slurp(programs / f)));
  MutationPlan plan;
  plan.rng_seed = 7;
  plan.rounds = 2;
  plan.mutants_per_seed = 4;
  auto first = mutate_program(seeds, plan);
  auto again = mutate_program(seeds, plan);
  double dt = seconds_since(t0);
  if (first.size() != 60) {
    pass = false;
    detail = "expected 60 mutants, got " + std::to_string(first.size());
  }
  for (size_t i = 0; i < first.size() && pass; ++i) {
    if (pretty_print(first[i].unit) != pretty_print(again[i].unit)) {
      pass = false;
      detail = "reruns are not byte-identical at mutant " + std::to_string(i);
    }
  }
  if (dt >= 5.0) {
    pass = false;
    detail = "generation took too long";
  }
  if (pass) {
    std::ostringstream os;
    os << detail << "; 60 desk-scale mutants generated twice, byte-identical, in " << dt
       << "s";
    detail = os.str();
  }
  report(8, "mutant counts follow the scale law and reruns are byte-identical", pass, detail);
}

// ---------------------------------------------------------------------------
// 9. bug-finding demonstration with the bundled mock engines
// ---------------------------------------------------------------------------

void criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  fs::path triggers = fs::path(CORPUS_DIR) / "triggers";
  std::vector<std::string> seeds;
  for (const auto& e : fs::directory_iterator(triggers))
    if (e.path().extension() == ".st") seeds.push_back(e.path().string());
  std::sort(seeds.begin(), seeds.end());

  MutationPlan plan;
  plan.rounds = 0;  // the triggers run as-is

  EngineAdapter buggy;
  buggy.name = "buggy-mock";
  buggy.command = {MOCKPLC_BIN_PATH, "--profile", "buggy", "{program}"};
  buggy.timeout_s = 10;

  EngineAdapter identity;
  identity.name = "identity-mock";
  identity.command = {MOCKPLC_BIN_PATH, "--profile", "faithful", "{program}"};
  identity.timeout_s = 10;

  fs::path work = fs::temp_directory_path() / "stref-acceptance";
  CampaignReport flagged = campaign(seeds, plan, buggy, 2, (work / "buggy").string());
  CampaignReport clean = campaign(seeds, plan, identity, 2, (work / "identity").string());

  // one inconsistency per emulated defect class, keyed by trigger program
  std::map<std::string, std::string> class_by_file = {
      {"t1_var_prefix.st", "var-prefix"},   {"t2_div_implicit.st", "implicit-div0"},
      {"t4_oob_implicit.st", "implicit-oob"}, {"t6_mod_zero.st", "mod0"},
      {"t7_mod_sign.st", "mod-sign"},       {"t8_power.st", "no-power"}};
  std::set<std::string> flagged_classes;
  for (const auto& row : flagged.rows) {
    if (row.verdict.k != Verdict::K::Inconsistent) continue;
    auto it = class_by_file.find(fs::path(row.program).filename().string());
    if (it != class_by_file.end()) flagged_classes.insert(it->second);
  }
  bool pass = flagged_classes.size() == class_by_file.size();
  std::string detail;
  if (!pass) {
    detail = "missed classes:";
    for (const auto& [file, cls] : class_by_file)
      if (!flagged_classes.count(cls)) detail += " " + cls;
  }
  if (clean.summary.inconsistent != 0) {
    pass = false;
    detail += " identity mock reported " + std::to_string(clean.summary.inconsistent) +
              " inconsistencies";
  }
  double dt = seconds_since(t0);
  if (dt >= 60) {
    pass = false;
    detail += " too slow";
  }
  if (pass) {
    std::ostringstream os;
    os << "all 6 defect classes flagged; identity mock fully consistent; " << dt << "s";
    detail = os.str();
  }
  report(9, "the buggy mock is flagged per defect class, the identity mock is not", pass,
         detail);
}

// ---------------------------------------------------------------------------
// 10. explicit scope statement
// ---------------------------------------------------------------------------

void criterion_10() {
  report(10, "large-scale evaluation is explicitly out of scope", true,
         "validating against real PLC toolchains and external program corpora needs "
         "licenses and hardware this repo does not ship; criteria 1-9 stand in via "
         "property suites, oracle equivalences and mock-adapter campaigns");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n----------------\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("----------------\n%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILED",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
