// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include "stref/error.hpp"
#include "stref/interp.hpp"
#include "stref/mutate.hpp"
#include "stref/parser.hpp"
#include "stref/printer.hpp"

using namespace stref;

namespace {

SourceUnit parse_str(const std::string& s) { return parse_source(s); }

const char* kSeed = R"(PROGRAM MAIN
VAR a : INT; b : INT; c : INT; f : BOOL; g : BOOL; END_VAR
  a := b;
  c := a + b;
  f := a > b;
  g := f AND g OR f;
  IF NOT f THEN
    EXIT;
  END_IF;
END_PROGRAM)";

}  // namespace

TEST_CASE("the operator set matches the mutation table") {
  CHECK(all_mutation_operators().size() == kMutationOperatorCount);
  CHECK(kMutationOperatorCount == 12);
  std::set<std::string> names;
  for (auto op : all_mutation_operators()) names.insert(to_string(op));
  CHECK(names == std::set<std::string>{
                     "VariableRandomAssignment", "ScalarVariableReplacement",
                     "ArithmeticOperatorReplacement", "ArithmeticOperatorInsertion",
                     "ArithmeticOperatorDeletion", "RelationalOperatorReplacement",
                     "LogicalConnectorReplacement", "LogicalConnectorInsertion",
                     "LogicalConnectorDeletion", "NotMutation", "StatementInsertion",
                     "StatementDeletion"});
}

TEST_CASE("random_init: every elementary entry gains an initializer") {
  SourceUnit unit = parse_str(R"(TYPE Point : STRUCT x : INT; END_STRUCT END_TYPE
PROGRAM MAIN
VAR a : INT; b : BOOL; p : Point; s : STRING; t : TIME; END_VAR
END_PROGRAM)");
  Rng rng(42);
  random_init(unit, rng);
  const auto& entries = unit.pous[0].sections[0].entries;
  CHECK(entries[0].init != nullptr);  // a : INT := <n>
  CHECK(entries[1].init != nullptr);  // b : BOOL := TRUE|FALSE
  CHECK(entries[2].init == nullptr);  // p : Point stays untouched
  CHECK(entries[3].init != nullptr);
  CHECK(entries[4].init != nullptr);

  // the initialized unit still parses and runs
  std::string text = pretty_print(unit);
  SourceUnit again = parse_str(text);
  Outcome out = run(again, "MAIN", 100000);
  CHECK(out.k == Outcome::K::Success);
}

TEST_CASE("random_init: deterministic under the same rng seed") {
  SourceUnit a = parse_str(kSeed), b = parse_str(kSeed);
  Rng r1(7), r2(7);
  random_init(a, r1);
  random_init(b, r2);
  CHECK(pretty_print(a) == pretty_print(b));
  Rng r3(8);
  SourceUnit c = parse_str(kSeed);
  random_init(c, r3);
  CHECK(pretty_print(a) != pretty_print(c));
}

TEST_CASE("apply_operator: relational replacement rewrites one comparison") {
  SourceUnit unit = parse_str(kSeed);
  std::string before = pretty_print(unit);
  Rng rng(1);
  apply_operator(MutationOperator::RelationalOperatorReplacement, unit, rng);
  std::string after = pretty_print(unit);
  CHECK(before != after);
  CHECK(after.find("a > b") == std::string::npos);  // the only relational site
  // still parseable
  CHECK(pretty_print(parse_str(after)) == after);
}

TEST_CASE("apply_operator: logical connector deletion keeps the left operand") {
  SourceUnit unit =
      parse_str("PROGRAM MAIN VAR a : BOOL; b : BOOL; c : BOOL; x : BOOL; END_VAR "
                "x := a AND b OR c; END_PROGRAM");
  Rng rng(3);
  // the OR node and the AND node are both sites; force a few draws and check
  // the result is always a prefix chain
  bool saw_or_deletion = false;
  for (uint64_t s = 0; s < 12; ++s) {
    SourceUnit u2 = clone(unit);
    Rng r(s);
    apply_operator(MutationOperator::LogicalConnectorDeletion, u2, r);
    std::string text = pretty_print(u2);
    if (text.find("x := a AND b;") != std::string::npos) saw_or_deletion = true;
    bool ok = text.find("x := a AND b;") != std::string::npos ||
              text.find("x := a OR c;") != std::string::npos;
    CHECK(ok);
  }
  CHECK(saw_or_deletion);
}

TEST_CASE("apply_operator: statement deletion can remove an EXIT") {
  SourceUnit unit = parse_str(R"(PROGRAM MAIN
VAR i : INT; END_VAR
  FOR i := 1 TO 3 DO
    EXIT;
  END_FOR;
END_PROGRAM)");
  bool removed_exit = false;
  for (uint64_t s = 0; s < 10 && !removed_exit; ++s) {
    SourceUnit u2 = clone(unit);
    Rng r(s);
    apply_operator(MutationOperator::StatementDeletion, u2, r);
    removed_exit = pretty_print(u2).find("EXIT") == std::string::npos;
  }
  CHECK(removed_exit);
}

TEST_CASE("apply_operator: scalar replacement swaps within the type family") {
  SourceUnit unit = parse_str("PROGRAM MAIN VAR a : INT; b : INT; c : INT; f : BOOL; END_VAR "
                              "a := b; END_PROGRAM");
  std::set<std::string> seen;
  for (uint64_t s = 0; s < 40; ++s) {
    SourceUnit u2 = clone(unit);
    Rng r(s);
    apply_operator(MutationOperator::ScalarVariableReplacement, u2, r);
    std::string text = pretty_print(u2);
    // the BOOL f never appears on the right-hand side
    CHECK(text.find(":= f;") == std::string::npos);
    seen.insert(text);
    CHECK(pretty_print(parse_str(text)) == text);
  }
  CHECK(seen.size() > 1);  // variables and literals both show up
}

TEST_CASE("apply_operator: insertions append an operand") {
  SourceUnit unit = parse_str("PROGRAM MAIN VAR a : INT; b : INT; x : INT; END_VAR "
                              "x := a + b; END_PROGRAM");
  Rng rng(5);
  apply_operator(MutationOperator::ArithmeticOperatorInsertion, unit, rng);
  std::string text = pretty_print(unit);
  CHECK(text != pretty_print(parse_str("PROGRAM MAIN VAR a : INT; b : INT; x : INT; END_VAR "
                                       "x := a + b; END_PROGRAM")));
  CHECK(pretty_print(parse_str(text)) == text);
}

TEST_CASE("apply_operator: NOT mutation toggles") {
  SourceUnit unit = parse_str("PROGRAM MAIN VAR f : BOOL; END_VAR f := NOT f; END_PROGRAM");
  // unwrapping the single NOT node is one of the sites
  bool unwrapped = false;
  for (uint64_t s = 0; s < 10 && !unwrapped; ++s) {
    SourceUnit u2 = clone(unit);
    Rng r(s);
    apply_operator(MutationOperator::NotMutation, u2, r);
    unwrapped = pretty_print(u2).find("NOT") == std::string::npos;
  }
  CHECK(unwrapped);
}

TEST_CASE("apply_operator: no applicable site") {
  SourceUnit unit = parse_str("PROGRAM MAIN VAR s : STRING; END_VAR END_PROGRAM");
  Rng rng(1);
  CHECK_THROWS_AS(apply_operator(MutationOperator::ArithmeticOperatorReplacement, unit, rng),
                  Error);
  try {
    apply_operator(MutationOperator::RelationalOperatorReplacement, unit, rng);
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::NoApplicableSite);
  }
}

TEST_CASE("mutants from expression operators always re-parse") {
  SourceUnit unit = parse_str(kSeed);
  MutationOperator expr_ops[] = {
      MutationOperator::ScalarVariableReplacement,
      MutationOperator::ArithmeticOperatorReplacement,
      MutationOperator::ArithmeticOperatorInsertion,
      MutationOperator::ArithmeticOperatorDeletion,
      MutationOperator::RelationalOperatorReplacement,
      MutationOperator::LogicalConnectorReplacement,
      MutationOperator::LogicalConnectorInsertion,
      MutationOperator::LogicalConnectorDeletion,
      MutationOperator::NotMutation,
      MutationOperator::VariableRandomAssignment,
  };
  for (uint64_t s = 0; s < 50; ++s) {
    SourceUnit u2 = clone(unit);
    Rng r(s);
    for (auto op : expr_ops) {
      try {
        apply_operator(op, u2, r);
      } catch (const Error& e) {
        REQUIRE(e.kind == ErrKind::NoApplicableSite);
      }
    }
    std::string text = pretty_print(u2);
    SourceUnit again = parse_str(text);
    REQUIRE(pretty_print(again) == text);
  }
}

TEST_CASE("site fairness: uniform choice over applicable sites (property)") {
  // four identical arithmetic sites, one per statement
  const char* src = "PROGRAM MAIN VAR a : INT; b : INT; x : INT; END_VAR "
                    "x := a + b; x := a + b; x := a + b; x := a + b; END_PROGRAM";
  SourceUnit unit = parse_str(src);
  const int kDraws = 2000, kSites = 4;
  int counts[kSites] = {0, 0, 0, 0};
  for (int d = 0; d < kDraws; ++d) {
    SourceUnit u2 = clone(unit);
    Rng r(static_cast<uint64_t>(d) + 1000);
    apply_operator(MutationOperator::ArithmeticOperatorReplacement, u2, r);
    // the swap always changes exactly one statement
    const auto& before = unit.pous[0].body;
    const auto& after = u2.pous[0].body;
    for (int k = 0; k < kSites; ++k) {
      if (pretty_print(*before[k]) != pretty_print(*after[k])) {
        ++counts[k];
        break;
      }
    }
  }
  double p = 1.0 / kSites;
  double sigma = std::sqrt(kDraws * p * (1 - p));
  for (int i = 0; i < kSites; ++i) {
    CAPTURE(i);
    CHECK(std::abs(counts[i] - kDraws * p) <= 3 * sigma);
  }
}

TEST_CASE("mutate_program: scale law and determinism") {
  CHECK(MutationPlan::expected_mutants(30, 3, 10) == 33300);
  CHECK(MutationPlan::expected_mutants(1, 1, 1) == 1);
  CHECK(MutationPlan::expected_mutants(3, 2, 4) == 60);

  std::vector<SourceUnit> seeds;
  seeds.push_back(parse_str(kSeed));
  MutationPlan plan;
  plan.rng_seed = 99;
  plan.rounds = 2;
  plan.mutants_per_seed = 4;
  auto mutants = mutate_program(seeds, plan);
  CHECK(mutants.size() == MutationPlan::expected_mutants(1, 2, 4));  // 4 + 16

  // rounds chain: round-2 mutants point at round-1 parents
  CHECK(mutants[0].round == 1);
  CHECK(mutants[0].parent_index == SIZE_MAX);
  CHECK(mutants[4].round == 2);
  CHECK(mutants[4].parent_index == 0);
  CHECK(mutants[19].parent_index == 3);

  // byte-identical rerun
  auto again = mutate_program(seeds, plan);
  REQUIRE(again.size() == mutants.size());
  for (size_t i = 0; i < mutants.size(); ++i) {
    REQUIRE(pretty_print(again[i].unit) == pretty_print(mutants[i].unit));
    REQUIRE(again[i].operator_trace == mutants[i].operator_trace);
  }

  // a different rng seed produces a different corpus
  MutationPlan other = plan;
  other.rng_seed = 100;
  auto shifted = mutate_program(seeds, other);
  bool any_diff = false;
  for (size_t i = 0; i < mutants.size() && !any_diff; ++i)
    any_diff = pretty_print(shifted[i].unit) != pretty_print(mutants[i].unit);
  CHECK(any_diff);
}

TEST_CASE("mutate_program: sharded generation matches serial") {
  std::vector<SourceUnit> seeds;
  seeds.push_back(parse_str(kSeed));
  seeds.push_back(parse_str("PROGRAM MAIN VAR a : INT; b : INT; END_VAR a := a - b; "
                            "END_PROGRAM"));
  MutationPlan plan;
  plan.rng_seed = 5;
  plan.rounds = 2;
  plan.mutants_per_seed = 5;
  auto serial = mutate_program(seeds, plan, 1);
  auto parallel = mutate_program(seeds, plan, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i)
    REQUIRE(pretty_print(serial[i].unit) == pretty_print(parallel[i].unit));
}

TEST_CASE("mutate_program: weights restrict the drawn operators") {
  std::vector<SourceUnit> seeds;
  seeds.push_back(parse_str(kSeed));
  MutationPlan plan;
  plan.rng_seed = 1;
  plan.rounds = 1;
  plan.mutants_per_seed = 20;
  plan.max_ops_per_mutant = 2;
  plan.weights[MutationOperator::StatementDeletion] = 1;  // only deletions
  auto mutants = mutate_program(seeds, plan);
  for (const auto& m : mutants)
    for (const auto& op : m.operator_trace) CHECK(op == "StatementDeletion");
}
