#include "tracegp/runner.hpp"

#include <chrono>
#include <future>
#include <sstream>

#include "tracegp/print.hpp"

#include "json.hpp"

namespace tracegp {

std::string RunReport::to_json(bool volatile_fields) const {
  nlohmann::json j;
  j["problem"] = problem;
  j["seed"] = seed;
  j["converged"] = converged;
  j["cycles"] = cycles;
  j["iterations"] = iterations;
  j["assessments"] = assessments;
  j["assessments_to_converge"] = assessments_to_converge;
  j["final_global"] = final_global;
  j["final_program"] = final_program;
  if (volatile_fields) j["wall_ms"] = wall_ms;
  return j.dump();
}

CycleConfig apply_overrides(CycleConfig cfg, const RunOverrides& o) {
  if (o.max_cycles) cfg.max_cycles = *o.max_cycles;
  if (o.n_stretch) cfg.n_stretch = *o.n_stretch;
  if (o.n_mutate) cfg.n_mutate = *o.n_mutate;
  if (o.mutation_budget) cfg.mutation_budget = *o.mutation_budget;
  if (o.stretch_fn) cfg.allow_stretch_fn = *o.stretch_fn;
  if (o.suppose_anywhere) cfg.suppose_anywhere = *o.suppose_anywhere;
  if (o.use_oracle) cfg.use_oracle = *o.use_oracle;
  if (o.call_limit) cfg.eval.call_limit = *o.call_limit;
  return cfg;
}

RunReport run_one(const ProblemDef& def, uint64_t seed, const RunOverrides& overrides,
                  LogSink log) {
  auto t0 = std::chrono::steady_clock::now();
  ValuePool pool;
  ProblemInstance inst = def.build(pool);
  CycleConfig cfg = apply_overrides(inst.config, overrides);

  EvolveResult res = evolve(inst.initial, *inst.ctx, inst.criterion, cfg, pool, seed, log);

  RunReport rep;
  rep.problem = inst.name;
  rep.seed = seed;
  rep.converged = res.converged;
  rep.cycles = res.stats.cycles;
  rep.iterations = res.stats.iterations;
  rep.assessments = res.stats.assessments;
  rep.assessments_to_converge = res.stats.assessments_to_converge;
  rep.final_global = res.final_global;
  rep.final_program = print_program(*inst.ctx, res.program, false);
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

std::vector<RunReport> run_many(const ProblemDef& def, uint64_t base_seed, int runs,
                                const RunOverrides& overrides, int jobs) {
  std::vector<RunReport> out(runs);
  if (jobs <= 1) {
    for (int i = 0; i < runs; ++i) out[i] = run_one(def, base_seed + i, overrides);
    return out;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= runs) return;
      out[i] = run_one(def, base_seed + i, overrides);
    }
  };
  std::vector<std::future<void>> futs;
  for (int j = 0; j < std::min(jobs, runs); ++j)
    futs.push_back(std::async(std::launch::async, worker));
  for (auto& f : futs) f.get();
  return out;
}

BenchSummary summarize(const std::vector<RunReport>& reports) {
  BenchSummary s;
  s.runs = static_cast<int>(reports.size());
  std::vector<long> conv;
  double iter_sum = 0;
  for (const auto& r : reports) {
    s.total_wall_ms += r.wall_ms;
    if (r.converged) {
      ++s.converged;
      conv.push_back(r.assessments_to_converge);
      iter_sum += static_cast<double>(r.iterations);
    }
  }
  s.convergence_rate = s.runs ? static_cast<double>(s.converged) / s.runs : 0;
  if (!conv.empty()) {
    std::sort(conv.begin(), conv.end());
    long sum = 0;
    for (long v : conv) sum += v;
    s.mean_assessments = static_cast<double>(sum) / conv.size();
    s.min_assessments = conv.front();
    s.max_assessments = conv.back();
    // Empirical 99% quantile: the ceil(0.99 n)-th order statistic.
    size_t idx = static_cast<size_t>(std::ceil(0.99 * conv.size()));
    if (idx == 0) idx = 1;
    s.q99_assessments = conv[std::min(idx, conv.size()) - 1];
    s.mean_iterations = iter_sum / conv.size();
  }
  return s;
}

BenchSummary benchmark_parity(int runs, uint64_t base_seed, int jobs,
                              std::vector<RunReport>* reports_out) {
  const ProblemDef* def = find_problem("parity");
  std::vector<RunReport> reports = run_many(*def, base_seed, runs, {}, jobs);
  BenchSummary s = summarize(reports);
  if (reports_out) *reports_out = std::move(reports);
  return s;
}

std::string format_report_table(const std::vector<RunReport>& reports) {
  std::ostringstream os;
  char buf[256];
  snprintf(buf, sizeof buf, "%-12s %6s %10s %8s %12s %12s %10s\n", "problem", "seed", "converged",
           "cycles", "iterations", "assessments", "wall-ms");
  os << buf;
  for (const auto& r : reports) {
    snprintf(buf, sizeof buf, "%-12s %6llu %10s %8d %12ld %12ld %10.1f\n", r.problem.c_str(),
             static_cast<unsigned long long>(r.seed), r.converged ? "yes" : "no", r.cycles,
             r.iterations, r.assessments, r.wall_ms);
    os << buf;
  }
  return os.str();
}

}  // namespace tracegp
