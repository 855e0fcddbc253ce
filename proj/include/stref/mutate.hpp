// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stref/ast.hpp"
#include "stref/rng.hpp"

namespace stref {

enum class MutationOperator {
  VariableRandomAssignment,
  ScalarVariableReplacement,
  ArithmeticOperatorReplacement,
  ArithmeticOperatorInsertion,
  ArithmeticOperatorDeletion,
  RelationalOperatorReplacement,
  LogicalConnectorReplacement,
  LogicalConnectorInsertion,
  LogicalConnectorDeletion,
  NotMutation,
  StatementInsertion,
  StatementDeletion,
};

constexpr size_t kMutationOperatorCount = 12;
const char* to_string(MutationOperator op);
const std::vector<MutationOperator>& all_mutation_operators();

// Seeded campaign parameters. Defaults reproduce the reference campaign
// shape (3 rounds, 10 mutants per seed).
struct MutationPlan {
  uint64_t rng_seed = 1;
  int rounds = 3;
  int mutants_per_seed = 10;
  int max_ops_per_mutant = 3;
  std::map<MutationOperator, uint32_t> weights;  // empty = all 1

  // s seeds for R rounds at m per seed yield s * (m + m^2 + ... + m^R).
  static uint64_t expected_mutants(uint64_t seeds, int rounds, int per_seed);
};

// Gives (or replaces) a random initializer on every elementary VAR-section
// entry; compound entries are left untouched.
void random_init(SourceUnit& unit, Rng& rng);

// Applies one uniformly chosen site rewrite for `op`. Throws
// Error(NoApplicableSite) when the unit has no site for it.
void apply_operator(MutationOperator op, SourceUnit& unit, Rng& rng);

struct Mutant {
  SourceUnit unit;
  int round = 1;
  size_t seed_index = 0;    // index into the original seed list
  size_t parent_index = 0;  // index into the previous round (SIZE_MAX = seed)
  uint64_t rng_seed = 0;    // per-mutant derived seed
  std::vector<std::string> operator_trace;
  std::vector<std::string> skipped;  // operators without applicable sites
};

// Full campaign tree: every round mutates the previous round's outputs
// (round 1 mutates the seeds). Deterministic in `plan.rng_seed`; generation
// is sharded across threads when `jobs` > 1 with identical output.
std::vector<Mutant> mutate_program(const std::vector<SourceUnit>& seeds,
                                   const MutationPlan& plan, int jobs = 1);

}  // namespace stref
