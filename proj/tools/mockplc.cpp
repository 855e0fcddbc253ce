// SPDX-License-Identifier: Apache-2.0
//
// mockplc - a deliberately defective Structured Text engine used as a
// differential-testing target. The faithful profile behaves exactly like
// the reference; the buggy profile reproduces a set of classic PLC-compiler
// defects:
//
//   var-prefix      a first statement writing an identifier that starts with
//                   "VAR" aborts (parser defect)
//   implicit-div0   a computed zero divisor silently yields 0 (only the
//                   literal form is rejected)
//   implicit-oob    computed array subscripts clamp instead of failing
//   mod0            x MOD 0 yields 0
//   mod-sign        MOD takes the divisor's sign (-7 MOD 3 = 2)
//   no-power        the ** operator is rejected
//
// The output format matches `stref run`, so it can be wired in as an
// adapter command: mockplc --profile buggy {program}

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stref/interp.hpp"
#include "stref/machine.hpp"
#include "stref/parser.hpp"

using namespace stref;

int main(int argc, char** argv) {
  CLI::App app{"mock Structured Text engine with selectable defects"};
  std::string program;
  std::string profile = "faithful";
  std::vector<std::string> bugs;
  std::string entry = "MAIN";
  double timeout_s = 10.0;
  app.add_option("program", program, "program file")->required();
  app.add_option("--profile", profile, "faithful | buggy (default faithful)");
  app.add_option("--bugs", bugs, "individual defect names")->delimiter(',');
  app.add_option("--entry", entry, "entry PROGRAM name");
  app.add_option("--timeout", timeout_s, "time limit in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  Quirks q;
  if (profile == "buggy") {
    q.mod_sign_floored = true;
    q.mod_zero_yields_zero = true;
    q.implicit_div_zero_ok = true;
    q.implicit_index_overflow_ok = true;
    q.var_prefix_crash = true;
    q.power_unsupported = true;
  } else if (profile != "faithful") {
    std::cerr << "unknown profile '" << profile << "'\n";
    return 64;
  }
  for (const auto& b : bugs) {
    if (b == "var-prefix") q.var_prefix_crash = true;
    else if (b == "implicit-div0") q.implicit_div_zero_ok = true;
    else if (b == "implicit-oob") q.implicit_index_overflow_ok = true;
    else if (b == "mod0") q.mod_zero_yields_zero = true;
    else if (b == "mod-sign") q.mod_sign_floored = true;
    else if (b == "no-power") q.power_unsupported = true;
    else {
      std::cerr << "unknown bug '" << b << "'\n";
      return 64;
    }
  }

  std::ifstream in(program, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << program << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  SourceUnit unit;
  try {
    unit = parse_source(buf.str());
  } catch (const Error& e) {
    std::cerr << "ERROR line=" << e.line << " kind=" << to_string(e.kind)
              << " msg=" << e.what() << "\n";
    return 1;
  }
  uint64_t fuel = static_cast<uint64_t>(timeout_s * static_cast<double>(kFuelPerSecond));
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long long>(timeout_s * 2000));
  Outcome out = run(unit, entry, fuel, q, deadline);
  switch (out.k) {
    case Outcome::K::Success:
      std::cout << render_rows(out.rows);
      return 0;
    case Outcome::K::Abnormal:
      std::cerr << "ERROR line=" << out.line << " kind=" << to_string(out.err)
                << " msg=" << out.msg << "\n";
      return 1;
    default:
      std::cerr << "TIMEOUT after " << timeout_s << "s\n";
      return 124;
  }
}
