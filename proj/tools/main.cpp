#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "tracegp/print.hpp"
#include "tracegp/runner.hpp"

using namespace tracegp;

namespace {

// Resolves a problem argument: a registry name or a path to a .prob file.
ProblemDef resolve_problem(const std::string& arg) {
  if (const ProblemDef* d = find_problem(arg)) return *d;
  if (std::filesystem::exists(arg))
    return ProblemDef{arg, "problem file",
                      [arg](ValuePool& pool) { return load_problem_file(arg, pool); }};
  throw CLI::ValidationError("problem", "unknown problem '" + arg +
                                            "' (not a registry name or readable file)");
}

int cmd_run(const std::string& problem, uint64_t seed, int runs, const RunOverrides& ov, int jobs,
            const std::string& out_path, const std::string& log_path, bool verbose) {
  ProblemDef def = resolve_problem(problem);

  std::ofstream log_file;
  LogSink sink = nullptr;
  if (!log_path.empty()) {
    log_file.open(log_path);
    if (!log_file) {
      std::cerr << "cannot open log file " << log_path << "\n";
      return 1;
    }
    sink = [&log_file](const AttemptLog& a) {
      log_file << "{\"cycle\":" << a.cycle << ",\"phase\":\"" << phase_name(a.phase)
               << "\",\"attempt\":" << a.attempt << ",\"site\":" << a.site << ",\"old\":"
               << a.old_score << ",\"new\":" << a.new_score
               << ",\"accepted\":" << (a.accepted ? "true" : "false")
               << ",\"assessments\":" << a.assessments << "}\n";
    };
  }

  std::vector<RunReport> reports;
  if (runs == 1 && sink) {
    reports.push_back(run_one(def, seed, ov, sink));
  } else {
    reports = run_many(def, seed, runs, ov, jobs);
  }

  std::cout << format_report_table(reports);
  BenchSummary s = summarize(reports);
  std::cout << "\nconverged " << s.converged << "/" << s.runs;
  if (s.converged > 0)
    std::cout << ", mean assessments to convergence " << s.mean_assessments << " (min "
              << s.min_assessments << ", max " << s.max_assessments << ")";
  std::cout << "\n";
  if (verbose || runs == 1) {
    for (const auto& r : reports) {
      std::cout << "\n# seed " << r.seed << (r.converged ? " (converged)" : " (exhausted)")
                << "\n"
                << r.final_program;
    }
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::app);
    if (!out) {
      std::cerr << "cannot open " << out_path << "\n";
      return 1;
    }
    for (const auto& r : reports) out << r.to_json() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tracegp - evolves functional programs by locally scored mutation"};
  app.require_subcommand(1);

  // run
  std::string problem;
  uint64_t seed = 1;
  int runs = 1;
  int jobs = 1;
  std::string out_path, log_path;
  bool verbose = false;
  RunOverrides ov;
  std::optional<int> max_cycles, n_stretch, n_mutate, budget, call_limit;
  bool stretch_fn = false, suppose_anywhere = false, no_oracle = false;

  auto* run = app.add_subcommand("run", "evolve a problem for one or more seeds");
  run->add_option("problem", problem, "registry problem name or problem file")->required();
  run->add_option("--seed", seed, "base seed (runs use seed, seed+1, ...)");
  run->add_option("--runs", runs, "number of independent runs");
  run->add_option("--jobs", jobs, "parallel worker slots");
  run->add_option("--max-cycles", max_cycles, "cycle limit per run");
  run->add_option("--n-stretch", n_stretch, "stretches per cycle");
  run->add_option("--n-mutate", n_mutate, "mutation attempts per cycle");
  run->add_option("--budget", budget, "node budget for mutation replacements");
  run->add_option("--call-limit", call_limit, "evaluation call limit");
  run->add_flag("--stretch-fn", stretch_fn, "enable the extract-function stretch");
  run->add_flag("--suppose-anywhere", suppose_anywhere,
                "allow suppose stretches at any site, not only equation roots");
  run->add_flag("--no-oracle", no_oracle, "evaluate recursive calls concretely while scoring");
  run->add_option("--out", out_path, "append one JSON record per run to this file");
  run->add_option("--log", log_path, "write per-attempt JSON records here (single run only)");
  run->add_flag("-v,--verbose", verbose, "print final programs for all runs");

  // bench
  auto* bench = app.add_subcommand("bench", "benchmarks");
  std::string bench_what = "parity";
  int bench_runs = 100;
  uint64_t bench_seed = 1;
  int bench_jobs = 1;
  std::string bench_out;
  bench->add_option("what", bench_what, "benchmark name (parity)");
  bench->add_option("--runs", bench_runs, "number of runs");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--jobs", bench_jobs, "parallel worker slots");
  bench->add_option("--out", bench_out, "append one JSON record per run to this file");

  // list-problems
  auto* list = app.add_subcommand("list-problems", "list the shipped problems");

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a problem file");
  validate->add_option("file", validate_path, "problem file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ov.max_cycles = max_cycles;
      ov.n_stretch = n_stretch;
      ov.n_mutate = n_mutate;
      ov.mutation_budget = budget;
      ov.call_limit = call_limit;
      if (stretch_fn) ov.stretch_fn = true;
      if (suppose_anywhere) ov.suppose_anywhere = true;
      if (no_oracle) ov.use_oracle = false;
      return cmd_run(problem, seed, runs, ov, jobs, out_path, log_path, verbose);
    }
    if (bench->parsed()) {
      if (bench_what != "parity") {
        std::cerr << "unknown benchmark '" << bench_what << "'\n";
        return 1;
      }
      std::vector<RunReport> reports;
      BenchSummary s = benchmark_parity(bench_runs, bench_seed, bench_jobs, &reports);
      std::cout << "runs:            " << s.runs << "\n"
                << "converged:       " << s.converged << " (" << 100.0 * s.convergence_rate
                << "%)\n"
                << "assessments to convergence: mean " << s.mean_assessments << ", min "
                << s.min_assessments << ", max " << s.max_assessments << ", q99 "
                << s.q99_assessments << "\n"
                << "mean iterations: " << s.mean_iterations << "\n"
                << "total wall:      " << s.total_wall_ms / 1000.0 << " s\n";
      if (!bench_out.empty()) {
        std::ofstream out(bench_out, std::ios::app);
        for (const auto& r : reports) out << r.to_json() << "\n";
      }
      return 0;
    }
    if (list->parsed()) {
      for (const auto& d : problem_registry())
        std::cout << d.name << "\t" << d.summary << "\n";
      return 0;
    }
    if (validate->parsed()) {
      ValuePool pool;
      ProblemInstance inst = load_problem_file(validate_path, pool);
      auto issues = validate_problem(inst, pool);
      if (issues.empty()) {
        std::cout << "ok: " << inst.name << " (" << inst.criterion.inputs.size()
                  << " test cases)\n";
        return 0;
      }
      for (const auto& i : issues) std::cout << "issue: " << i << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
