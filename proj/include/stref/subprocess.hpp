// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace stref {

struct SpawnResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
  std::string err;
};

// Runs argv[0] with the given arguments, captures stdout/stderr, and kills
// the child after `timeout_s` seconds. The child environment is reduced to
// an allow-list (PATH, HOME, LANG, LC_ALL). Throws Error(AdapterError) when
// the process cannot be started. Safe to call from multiple threads.
SpawnResult run_process(const std::vector<std::string>& argv, double timeout_s);

}  // namespace stref
