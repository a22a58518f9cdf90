#pragma once

#include <unordered_set>

#include "tracegp/compress.hpp"
#include "tracegp/gen.hpp"

namespace tracegp {

struct CycleConfig {
  int n_stretch = 3;
  int n_mutate = 300;
  int max_cycles = 10;
  int mutation_budget = 5;   // node budget for replacement expressions
  bool allow_stretch_fn = false;  // stretch kind 4 (extract-function) off by default
  bool suppose_anywhere = false;  // default: only at equation-body roots
  int lexpr_enum_depth = 6;
  EvalConfig eval;
  bool use_oracle = true;
};

// One application of a stretch, with enough payload to rewind it later.
// Nodes created by the stretch carry its id in their origin set; copies made
// by later stretches keep the marks of the nodes they were copied from.
struct StretchRecord {
  int32_t id = 0;
  int kind = 0;  // 1 suppose-wrap, 2 promote-if, 3 case-split, 4 extract-fn
  VarId var = -1;   // kind 3: the variable cased on
  FnId fn = -1;     // kind 4: the introduced function
};

struct EvolveStats {
  long assessments = 0;           // scoring passes over all test inputs
  long assessments_to_converge = -1;  // counter value when global score first hit 1
  long iterations = 0;            // stretches + mutation attempts + rewinds + compressions
  long stretches = 0;
  long mutation_attempts = 0;
  long mutations_accepted = 0;
  long rewind_ops = 0;
  long compress_passes = 0;
  long duplicates_skipped = 0;
  int cycles = 0;
};

enum class Phase { Init, Stretch, Mutate, Rewind, Compress };
const char* phase_name(Phase p);

// One line per search event, for the structured run log.
struct AttemptLog {
  int cycle;
  Phase phase;
  long attempt;
  Tag site;
  double old_score;
  double new_score;
  bool accepted;
  long assessments;
};
using LogSink = std::function<void(const AttemptLog&)>;

class NoImperfectExpression : public std::runtime_error {
 public:
  NoImperfectExpression() : std::runtime_error("all evaluated expressions score 1") {}
};

// Samples a tag with probability proportional to 1 - S(tag) over evaluated
// tags. Throws NoImperfectExpression when every evaluated tag scores 1
// (which signals convergence to the caller).
Tag pick_expr(const ScoreTable& scores, Rng& rng);

// The engine: owns the current program, its scores, the duplicate set and
// the counters. Stateless helpers below it are exposed for tests.
class Engine {
 public:
  Engine(Program initial, const TypingContext& ctx, const TestCriterion& tc, CycleConfig cfg,
         ValuePool& pool, uint64_t seed, LogSink log = nullptr);

  // One mutation attempt: pick a site, generate a same-typed replacement with
  // fresh tags, accept iff the replacement's local score strictly exceeds the
  // site's. Returns true when accepted.
  bool try_mutation();

  // One stretch at a sampled imperfect site. Returns the record, or nullopt
  // when no stretch kind applies anywhere after bounded retries.
  std::optional<StretchRecord> stretch();

  // Rewinds one record (its kind decides the transformation; score tests may
  // run trial scoring passes).
  void rewind(const StretchRecord& rec);

  // stretch xN, mutate xN, rewind in reverse order, compress.
  void run_cycle();

  // Cycles until the program scores perfectly or max_cycles is reached.
  bool evolve();

  const Program& program() const { return prog_; }
  const ScoreResult& scores() const { return scores_; }
  const EvolveStats& stats() const { return stats_; }
  const TypingContext& ctx() const { return ctx_; }
  int cycle() const { return cycle_; }

  // Verification hook used by the acceptance suite: called right before and
  // after every compression with the pre/post programs.
  std::function<void(const Program& before, const Program& after, const IoCollector& io)>
      compress_audit;

 private:
  void rescore(Phase phase, Tag site = kNoTag);
  void note_tested(const Program& p);
  bool already_tested(const Program& p) const;
  bool imperfect_exists() const;
  ScoreResult score_candidate(const Program& cand);
  bool try_rewind_trial(Program trial, Tag repl_tag, double baseline);
  void apply_rewind_1(const StretchRecord& rec);
  void apply_rewind_2(const StretchRecord& rec);
  void apply_rewind_3(const StretchRecord& rec);
  void apply_rewind_4(const StretchRecord& rec);
  // Replaces prog_ after checking invariants (typecheck + tag audit).
  void adopt(Program p, Phase phase, Tag site);
  std::vector<Tag> marked_nodes(int kind, int32_t id) const;

  Program prog_;
  const TypingContext& ctx_;
  const TestCriterion& tc_;
  CycleConfig cfg_;
  ValuePool& pool_;
  Rng rng_;
  LogSink log_;
  ScoreResult scores_;
  EvolveStats stats_;
  std::vector<StretchRecord> records_;
  std::unordered_set<std::string> tested_;
  int cycle_ = 0;
  long attempt_in_phase_ = 0;
};

// Convenience wrapper matching the module contract.
struct EvolveResult {
  bool converged;
  Program program;
  EvolveStats stats;
  double final_global;
};
EvolveResult evolve(Program initial, const TypingContext& ctx, const TestCriterion& tc,
                    const CycleConfig& cfg, ValuePool& pool, uint64_t seed, LogSink log = nullptr);

}  // namespace tracegp
