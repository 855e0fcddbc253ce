// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "stref/value.hpp"

namespace stref {

// Standard function library: the numerical, logical and string families plus
// the generated X_TO_Y translate functions.
bool is_builtin(const std::string& name);
Value dispatch_builtin(const std::string& name, const std::vector<Value>& args);

// All registered names (sorted). Translate names are generated from the
// supported conversion matrix.
const std::vector<std::string>& builtin_names();
size_t translate_function_count();

}  // namespace stref
