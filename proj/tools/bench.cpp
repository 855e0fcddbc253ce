// SPDX-License-Identifier: Apache-2.0
//
// stref-bench - compares the serial campaign runner against the OpenMP one
// on an identical mutant workload and checks that both produce the same
// verdicts. The reference interpreter itself is sequential; the parallelism
// is across independent program executions.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "stref/difftest.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace stref;
namespace fs = std::filesystem;

namespace {

const char* kSeedSource = R"(FUNCTION Scale : REAL
VAR_INPUT
  raw : INT;
  lo : REAL;
  hi : REAL;
END_VAR
  Scale := lo + (hi - lo) * INT_TO_REAL(raw) / 32767.0;
END_FUNCTION

PROGRAM MAIN
VAR
  i : INT;
  acc : DINT;
  x : REAL;
  flag : BOOL;
END_VAR
  FOR i := 1 TO 200 DO
    acc := acc + i * i - i / 2;
    IF acc MOD 7 = 0 THEN
      flag := NOT flag;
    END_IF;
  END_FOR;
  x := Scale(i, 0.0, 100.0);
  WHILE acc > 0 DO
    acc := acc - 977;
  END_WHILE;
END_PROGRAM
)";

double run_campaign(const std::vector<std::string>& seeds, const MutationPlan& plan,
                    double timeout_s, int jobs, const std::string& workdir,
                    CampaignReport& out) {
  auto t0 = std::chrono::steady_clock::now();
  EngineAdapter self = EngineAdapter::self();
  self.timeout_s = timeout_s;
  out = campaign(seeds, plan, self, jobs, workdir);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"campaign throughput: serial vs OpenMP"};
  int rounds = 2, per_seed = 16, jobs = 0;
  uint64_t rng_seed = 42;
  double timeout_s = 0.5;
  app.add_option("--rounds", rounds, "mutation rounds (default 2)");
  app.add_option("--per-seed", per_seed, "mutants per seed (default 16)");
  app.add_option("--jobs", jobs, "parallel jobs (default: hardware threads)");
  app.add_option("--seed", rng_seed, "rng seed");
  app.add_option("--timeout", timeout_s, "per-program time limit (default 0.5)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#else
  if (jobs <= 0) jobs = 1;
  std::cout << "(built without OpenMP; the parallel lane runs serially)\n";
#endif

  fs::path tmp = fs::temp_directory_path() / "stref-bench";
  fs::create_directories(tmp);
  fs::path seed_path = tmp / "seed.st";
  {
    std::ofstream out(seed_path, std::ios::binary);
    out << kSeedSource;
  }
  std::vector<std::string> seeds = {seed_path.string()};
  MutationPlan plan;
  plan.rng_seed = rng_seed;
  plan.rounds = rounds;
  plan.mutants_per_seed = per_seed;
  plan.max_ops_per_mutant = 3;

  CampaignReport serial_report, parallel_report;
  double t_serial = run_campaign(seeds, plan, timeout_s, 1, (tmp / "serial").string(),
                                 serial_report);
  double t_parallel = run_campaign(seeds, plan, timeout_s, jobs,
                                   (tmp / "parallel").string(), parallel_report);

  bool same = serial_report.rows.size() == parallel_report.rows.size();
  if (same) {
    for (size_t i = 0; i < serial_report.rows.size(); ++i) {
      if (serial_report.rows[i].verdict.k != parallel_report.rows[i].verdict.k) {
        same = false;
        break;
      }
    }
  }

  std::cout << "programs:        " << serial_report.rows.size() << "\n"
            << "serial:          " << t_serial << " s\n"
            << "parallel (" << jobs << "):    " << t_parallel << " s\n"
            << "speedup:         " << (t_parallel > 0 ? t_serial / t_parallel : 0) << "x\n"
            << "verdicts match:  " << (same ? "yes" : "NO") << "\n";
  return same ? 0 : 1;
}
