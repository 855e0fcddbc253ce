// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "stref/ast.hpp"
#include "stref/error.hpp"
#include "stref/machine.hpp"

namespace stref {

// Terminal outcome of one engine run.
struct Outcome {
  enum class K { Success, Abnormal, Timeout } k = K::Success;
  std::vector<SnapshotRow> rows;  // Success only
  ErrKind err = ErrKind::SemanticError;
  int line = 0;  // 1-based line of the offending statement (Abnormal)
  std::string msg;
  std::vector<std::string> notes;  // machine print_log (diagnostics)

  bool success() const { return k == K::Success; }
};

enum class ControlSignal { Normal, Exiting, Returning };

// Deliberate semantic deviations used by the buggy mock engine; the default
// is the faithful reference behavior.
struct Quirks {
  bool mod_sign_floored = false;        // -7 MOD 3 yields 2 instead of -1
  bool mod_zero_yields_zero = false;    // x MOD 0 yields 0 instead of failing
  bool implicit_div_zero_ok = false;    // computed zero divisor yields 0
  bool implicit_index_overflow_ok = false;  // computed subscripts clamp
  bool var_prefix_crash = false;        // first statement writing VAR* aborts
  bool power_unsupported = false;       // ** aborts
};

constexpr uint64_t kFuelPerSecond = 2'000'000;

// Tree-walking evaluator over one machine. The SourceUnit must outlive the
// evaluator and its machine (callables borrow declaration nodes).
class Evaluator {
public:
  explicit Evaluator(Machine& m, const Quirks& quirks = {}) : m_(m), quirks_(quirks) {}

  // POU/TYPE/VAR_GLOBAL registration (the preprocessing pass).
  void preprocess(const SourceUnit& unit);

  Value eval(const Expr& e);
  ControlSignal exec(const Stmt& s);
  ControlSignal exec_list(const StmtList& body);

  Value call_function(const std::string& name, const std::vector<Arg>& args);
  void call_function_block(Location instance, const std::vector<Arg>& args);

  // Lvalue resolution (assignment paths, multi-dimensional subscripts).
  Location find_index(const Expr& lvalue);

  TypePtr resolve_type(const TypeExpr& te);
  Value make_default(const TypePtr& t);
  Value instantiate_struct(const std::string& name, const AggregateE* inits);

  // Declares one POU's variable sections in the current (fresh) frame.
  // `bound` supplies evaluated VAR_INPUT values and VAR_IN_OUT caller
  // locations by parameter name.
  struct BoundArgs {
    std::map<std::string, Value> inputs;
    std::map<std::string, Location> in_outs;
  };
  void declare_sections(const PouDecl& pou, const BoundArgs* bound);

  Machine& machine() { return m_; }
  int current_line = 0;

private:
  friend Outcome run(const SourceUnit&, const std::string&, uint64_t, const Quirks&,
                     std::optional<std::chrono::steady_clock::time_point>);

  Value eval_call(const Expr& call);
  Value eval_binary(const Expr& e);
  Location array_element(Location base, const IndexE& ix);
  BoundArgs bind_args(const PouDecl& pou, const std::vector<Arg>& args);
  Value eval_global_init(const Expr& e);
  int64_t const_int(const Expr& e, const char* what);

  Machine& m_;
  Quirks quirks_;
};

// Preprocesses `unit` into a fresh machine (registration only, nothing run).
Machine preprocess(const SourceUnit& unit);

// Full run: preprocess, instantiate the entry program, execute its body.
// `fuel` is the deterministic step budget (one unit per statement and per
// loop-back edge); `deadline` adds a wall-clock cutoff on top. `inputs`
// seeds the machine's input queue, consumed by the entry program's
// VAR_INPUT entries in declaration order (campaigns leave it empty, so
// entry inputs take their defaults).
Outcome run(const SourceUnit& unit, const std::string& entry = "MAIN",
            uint64_t fuel = 10 * kFuelPerSecond, const Quirks& quirks = {},
            std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt,
            std::deque<Value> inputs = {});

}  // namespace stref
