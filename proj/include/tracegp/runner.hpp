#pragma once

#include "tracegp/problem.hpp"

namespace tracegp {

struct RunReport {
  std::string problem;
  uint64_t seed = 0;
  bool converged = false;
  int cycles = 0;
  long iterations = 0;
  long assessments = 0;
  long assessments_to_converge = -1;
  double final_global = 0;
  double wall_ms = 0;
  std::string final_program;

  // Line-delimited machine-readable record. `volatile_fields` controls
  // whether wall-clock time is included (excluded for byte-identity checks).
  std::string to_json(bool volatile_fields = true) const;
};

struct RunOverrides {
  std::optional<int> max_cycles;
  std::optional<int> n_stretch;
  std::optional<int> n_mutate;
  std::optional<int> mutation_budget;
  std::optional<bool> stretch_fn;
  std::optional<bool> suppose_anywhere;
  std::optional<bool> use_oracle;
  std::optional<int> call_limit;
};

CycleConfig apply_overrides(CycleConfig cfg, const RunOverrides& o);

// One deterministic evolution run. The log sink, when given, receives one
// record per search event.
RunReport run_one(const ProblemDef& def, uint64_t seed, const RunOverrides& overrides = {},
                  LogSink log = nullptr);

// Independent seeded runs seed, seed+1, ... Optionally in parallel; reports
// come back in seed order either way.
std::vector<RunReport> run_many(const ProblemDef& def, uint64_t base_seed, int runs,
                                const RunOverrides& overrides = {}, int jobs = 1);

struct BenchSummary {
  int runs = 0;
  int converged = 0;
  double convergence_rate = 0;
  double mean_assessments = 0;  // to convergence, over converged runs
  long min_assessments = 0;
  long max_assessments = 0;
  long q99_assessments = 0;  // empirical 99% quantile (order statistic)
  double mean_iterations = 0;
  double total_wall_ms = 0;
};

BenchSummary summarize(const std::vector<RunReport>& reports);

// The even-parity benchmark: `runs` seeded runs of the parity problem with
// the standard configuration.
BenchSummary benchmark_parity(int runs, uint64_t base_seed = 1, int jobs = 1,
                              std::vector<RunReport>* reports_out = nullptr);

std::string format_report_table(const std::vector<RunReport>& reports);

}  // namespace tracegp
