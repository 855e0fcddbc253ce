// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stref/value.hpp"

namespace stref {

// Identifier -> location map; nullopt is the explicit `undef` marker left
// behind by clearenv (distinct from absence).
using Env = std::map<std::string, std::optional<Location>>;

struct Frame {
  Env saved_env;
  Env saved_allenv;
  int saved_loop_depth = 0;
  std::string pou_name;
};

struct SnapshotRow {
  std::string name;   // qualified, e.g. MAIN.fb1.n
  std::string type;   // rendered type
  std::string value;  // rendered value
};

// Thrown when the step budget runs out; turned into Outcome::Timeout by run().
struct TimeoutSignal {};

// The runtime configuration: store, environments, function stack, type and
// const maps, fresh-location counter and I/O cells. One machine is single
// threaded; independent machines are fully isolated.
class Machine {
public:
  // store cells (dom(type_map) == dom(store) == [0, next_loc))
  std::vector<Value> store;
  std::vector<TypePtr> type_map;
  std::vector<bool> const_map;
  std::vector<bool> written;  // set by assign(), not by initialization

  Env env;    // current frame
  Env genv;   // POUs, enum members (preprocessing result)
  Env gvenv;  // VAR_GLOBAL
  std::vector<Frame> fstack;
  Env allenv;  // caller environment cached while a call binds its arguments

  std::map<std::string, Value> temp;  // enum declaration staging
  int64_t count = 0;                  // enum ordinal counter
  std::vector<std::string> gvid;      // declared global identifiers, in order
  std::vector<std::string> print_log;
  int loop_depth = 0;  // loops entered in the current activation
  uint64_t next_loc = 0;

  std::deque<Value> input_queue;
  std::vector<std::string> output_log;

  TypeTable types;
  std::vector<std::string> call_stack;  // active POU names (recursion check)
  std::string entry_name;

  // step budget; consume() throws TimeoutSignal when exhausted
  uint64_t fuel = UINT64_MAX;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  Machine() = default;
  Machine(const Machine&) = delete;
  Machine& operator=(const Machine&) = delete;
  Machine(Machine&&) = default;
  Machine& operator=(Machine&&) = default;

  // --- store primitives -----------------------------------------------------

  // Fresh location holding `v`; locations are never reused.
  Location alloc_raw(TypePtr type, Value v);

  // Allocation rule: fresh location bound to `id` in the current env.
  // `init` must already be adapted/constructed; compound values are stored
  // as built, scalars go through limit_assign. RedeclarationError when `id`
  // is live in the current frame.
  Location allocate(const std::string& id, const TypePtr& type, Value init);

  // Assignment rule: const check, then limit_assign into the slot; struct
  // and (one-dimensional) array targets copy element-wise.
  void assign(Location l, const Value& v);

  // Lookup of a plain identifier: env first, then genv (POU names, enum
  // members). The undef marker and absence both raise UnboundVariable.
  Value lookup(const std::string& id) const;
  std::optional<Location> env_location(const std::string& id) const;  // env only

  // clearenv rule: replaces the binding with the undef marker.
  void clearenv(const std::string& id);

  // VAR_GLOBAL registration (allocate + bind in gvenv + gvid append).
  Location register_global(const std::string& id, const TypePtr& type, Value init,
                           bool constant);

  void bind_env(const std::string& id, Location l);   // no redeclaration check
  void bind_genv(const std::string& id, const TypePtr& type, Value v, bool constant);

  // --- frames ----------------------------------------------------------------

  void push_frame(std::string pou_name);
  Frame pop_frame();  // restores env/allenv/loop_depth; EmptyStack when empty

  // --- const/type helpers -----------------------------------------------------

  void set_const_deep(Location l);
  const Value& at(Location l) const { return store[l.index]; }
  Value& at_mut(Location l) { return store[l.index]; }
  const TypePtr& type_of(Location l) const { return type_map[l.index]; }

  // --- rendering & snapshot ---------------------------------------------------

  std::string render_value(const Value& v) const;  // aggregates read the store

  // Deterministic name-sorted dump of gvenv, the entry env and all called FB
  // instances (dotted paths).
  std::vector<SnapshotRow> snapshot() const;
  std::string snapshot_text() const;

  // --- fuel -------------------------------------------------------------------

  void consume(uint64_t n = 1);

private:
  void collect_env(const Env& e, const std::string& prefix,
                   std::vector<SnapshotRow>& rows) const;
  uint64_t tick_ = 0;
};

std::string render_rows(const std::vector<SnapshotRow>& rows);

}  // namespace stref
