#include "tracegp/evolve.hpp"

#include "tracegp/print.hpp"

namespace tracegp {

namespace {
// Slack for the rewind score tests (>= / <=). The scores being compared are
// typically bitwise equal; the slack only absorbs FP contraction noise.
constexpr double kScoreEps = 1e-9;

std::string fresh_var_name(const TypingContext& ctx, Program& p) {
  while (true) {
    std::string name = "x" + std::to_string(p.next_gen_var++);
    if (!ctx.vars.contains(name)) return name;
  }
}

std::string fresh_fn_name(const TypingContext& ctx, Program& p) {
  while (true) {
    std::string name = "f" + std::to_string(p.next_gen_fn++);
    if (!ctx.fns.contains(name)) return name;
  }
}
}  // namespace

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Init: return "init";
    case Phase::Stretch: return "stretch";
    case Phase::Mutate: return "mutate";
    case Phase::Rewind: return "rewind";
    case Phase::Compress: return "compress";
  }
  return "?";
}

Tag pick_expr(const ScoreTable& scores, Rng& rng) {
  std::vector<double> weights;
  std::vector<Tag> pool;
  for (Tag t : scores.evaluated_tags()) {
    double s = scores.score(t);
    if (s < 1.0) {
      pool.push_back(t);
      weights.push_back(1.0 - s);
    }
  }
  int i = rng.weighted(weights);
  if (i < 0) throw NoImperfectExpression();
  return pool[i];
}

Engine::Engine(Program initial, const TypingContext& ctx, const TestCriterion& tc, CycleConfig cfg,
               ValuePool& pool, uint64_t seed, LogSink log)
    : prog_(std::move(initial)), ctx_(ctx), tc_(tc), cfg_(cfg), pool_(pool), rng_(seed),
      log_(std::move(log)) {
  if (auto err = typecheck(prog_, ctx_))
    throw std::invalid_argument("initial program does not typecheck: " + err->rule + " at tag " +
                                std::to_string(err->tag) + " (" + err->detail + ")");
  if (auto bad = audit_tags(prog_))
    throw std::invalid_argument("initial program has bad tag " + std::to_string(*bad));
  rescore(Phase::Init);
  note_tested(prog_);
}

void Engine::rescore(Phase phase, Tag site) {
  ScoreOptions opts;
  opts.eval = cfg_.eval;
  opts.use_oracle = cfg_.use_oracle;
  scores_ = score_program(prog_, ctx_, tc_, pool_, opts, nullptr, &stats_.assessments);
  if (scores_.perfect && stats_.assessments_to_converge < 0)
    stats_.assessments_to_converge = stats_.assessments;
  if (log_)
    log_({cycle_, phase, attempt_in_phase_, site, scores_.global, scores_.global, true,
          stats_.assessments});
}

void Engine::note_tested(const Program& p) { tested_.insert(print_program(ctx_, p, false)); }

bool Engine::already_tested(const Program& p) const {
  return tested_.count(print_program(ctx_, p, false)) > 0;
}

bool Engine::imperfect_exists() const {
  for (Tag t : scores_.table.evaluated_tags())
    if (scores_.table.score(t) < 1.0) return true;
  return false;
}

void Engine::adopt(Program p, Phase phase, Tag site) {
  if (auto err = typecheck(p, ctx_))
    throw std::logic_error(std::string("transformation broke typing: ") + err->rule + " " +
                           err->detail + " [" + phase_name(phase) + "]");
  if (auto bad = audit_tags(p))
    throw std::logic_error("transformation broke tag uniqueness at tag " + std::to_string(*bad) +
                           " [" + phase_name(phase) + "]");
  prog_ = std::move(p);
  rescore(phase, site);
  note_tested(prog_);
}

namespace {
ExprPtr find_node(const Program& p, Tag t) {
  ExprPtr out;
  visit_program(p, [&](const ExprPtr& n) {
    if (n->tag == t) out = n;
  });
  return out;
}
}  // namespace

// --- mutation -----------------------------------------------------------------

bool Engine::try_mutation() {
  ++stats_.mutation_attempts;
  ++stats_.iterations;
  ++attempt_in_phase_;

  Tag site = pick_expr(scores_.table, rng_);
  double old_score = scores_.table.score(site);
  auto log_result = [&](double new_score, bool accepted) {
    if (log_) log_({cycle_, Phase::Mutate, attempt_in_phase_, site, old_score, new_score, accepted,
                    stats_.assessments});
  };

  auto sites = analyze_sites(prog_, ctx_);
  auto it = sites.find(site);
  if (it == sites.end()) throw std::logic_error("scored tag not present in program");
  const SiteInfo& info = it->second;

  Program cand = prog_;
  auto callables = callables_of(cand, ctx_);
  auto repl = gen_expr(ctx_, callables, info.scope, info.type, cfg_.mutation_budget,
                       cand.next_tag, rng_);
  if (!repl) {
    log_result(old_score, false);
    return false;
  }
  Tag repl_tag = (*repl)->tag;
  auto replaced = replace_by_tag(cand, site, *repl);
  if (!replaced) throw std::logic_error("mutation site vanished");
  cand = std::move(*replaced);

  if (already_tested(cand)) {
    ++stats_.duplicates_skipped;
    log_result(old_score, false);
    return false;
  }

  ScoreResult cand_scores = score_candidate(cand);
  // The replacement must actually have been evaluated to count as improved:
  // an unevaluated tag reports the selection default of 1, which would
  // otherwise accept any mutation that breaks every test input badly enough
  // that no value carrying the new tag ever reaches an output.
  double new_score = cand_scores.table.score(repl_tag);
  bool accepted = cand_scores.table.evaluated(repl_tag) && new_score > old_score;
  log_result(new_score, accepted);
  if (!accepted) return false;

  prog_ = std::move(cand);
  scores_ = std::move(cand_scores);
  ++stats_.mutations_accepted;
  return true;
}

ScoreResult Engine::score_candidate(const Program& cand) {
  ScoreOptions opts;
  opts.eval = cfg_.eval;
  opts.use_oracle = cfg_.use_oracle;
  ScoreResult r = score_program(cand, ctx_, tc_, pool_, opts, nullptr, &stats_.assessments);
  note_tested(cand);
  if (r.perfect && stats_.assessments_to_converge < 0)
    stats_.assessments_to_converge = stats_.assessments;
  return r;
}

// --- stretching -----------------------------------------------------------------

std::optional<StretchRecord> Engine::stretch() {
  auto sites = analyze_sites(prog_, ctx_);
  // One site, one kind. When the drawn kind does not apply at the drawn
  // site, the stretch does nothing.
  {
    Tag site;
    try {
      site = pick_expr(scores_.table, rng_);
    } catch (const NoImperfectExpression&) {
      return std::nullopt;
    }
    ExprPtr site_ptr = find_node(prog_, site);
    const SiteInfo& info = sites.at(site);

    std::vector<int> kinds{1, 2, 3};
    if (cfg_.allow_stretch_fn) kinds.push_back(4);
    int kind = kinds[rng_.pick(static_cast<int>(kinds.size()))];

    if (kind == 1) {
      // The wrap goes at the top of the enclosing equation body; skip when
      // that spot is already an unimproved incubator (a suppose whose
      // condition is still the literal True).
      Tag wrap_at = cfg_.suppose_anywhere ? site : info.enclosing_equation_root;
      ExprPtr wrap_node = find_node(prog_, wrap_at);
      if (wrap_node->kind == ExprKind::Suppose &&
          is_literal_ctor(*wrap_node->cond(), ctx_.true_ctor()))
        return std::nullopt;
    }
    if (kind == 2) {
      if (site_ptr->kind != ExprKind::Suppose ||
          !(scores_.table.score(site_ptr->cond()->tag) >
            scores_.table.score(site_ptr->body()->tag)))
        return std::nullopt;
    }
    if (kind == 3 && info.scope.empty()) return std::nullopt;

    StretchRecord rec;
    rec.id = prog_.next_stretch_id;
    rec.kind = kind;

    Program next = prog_;
    ++next.next_stretch_id;
    OriginSet mark{rec.id};

    switch (kind) {
      case 1: {
        // e => suppose True then e end. By default the wrap is placed at the
        // top of the equation body enclosing the sampled site (the function
        // body root, or the root of the case-arm chain containing the site);
        // with suppose_anywhere it wraps the site itself.
        Tag wrap_at = cfg_.suppose_anywhere ? site : info.enclosing_equation_root;
        ExprPtr wrap_node = find_node(prog_, wrap_at);
        ExprPtr cond = make_cons(next.next_tag++, ctx_.true_ctor(), {}, mark);
        ExprPtr sup = make_suppose(next.next_tag++, cond, wrap_node, mark);
        next = *replace_by_tag(next, wrap_at, sup);
        break;
      }
      case 2: {
        // suppose c then e end => if c then e else e end (else is a fresh copy)
        ExprPtr then_branch = site_ptr->body();
        ExprPtr else_branch = retag(then_branch, next.next_tag);  // keeps origin marks
        ExprPtr iff = make_if(next.next_tag++, site_ptr->cond(), then_branch, else_branch, mark);
        next = *replace_by_tag(next, site, iff);
        break;
      }
      case 3: {
        // e => case x of c1(..) -> e[x/c1(..)]; ... end
        const auto& scope = info.scope;
        auto [var, var_type] = scope[rng_.pick_index(scope.size())];
        rec.var = var;
        const TypeDef& td = ctx_.type_def(var_type);
        std::vector<CaseArm> arms;
        bool first = true;
        for (CtorId c : td.ctors) {
          const CtorDef& cd = ctx_.ctor_def(c);
          CaseArm arm;
          arm.ctor = c;
          std::vector<ExprPtr> pat_args;
          for (size_t i = 0; i < cd.args.size(); ++i) {
            VarId b = ctx_.vars.intern(fresh_var_name(ctx_, next));
            arm.binders.push_back(b);
            pat_args.push_back(make_var(next.next_tag++, b, mark));
          }
          ExprPtr pattern = make_cons(next.next_tag++, c, std::move(pat_args), mark);
          ExprPtr base = first ? site_ptr : retag(site_ptr, next.next_tag);
          first = false;
          arm.body = substitute_var(base, var, pattern, next.next_tag);
          arms.push_back(std::move(arm));
        }
        ExprPtr scrut = make_var(next.next_tag++, var, mark);
        ExprPtr cas = make_case(next.next_tag++, scrut, std::move(arms), mark);
        next = *replace_by_tag(next, site, cas);
        break;
      }
      default: {
        // e : b => f(e, x1..xn) with a new identity-like f(y, x1..xn) = y
        FnId f = ctx_.fns.intern(fresh_fn_name(ctx_, next));
        rec.fn = f;
        VarId y = ctx_.vars.intern(fresh_var_name(ctx_, next));
        FunctionDef def;
        def.name = f;
        def.params.push_back(y);
        def.param_types.push_back(info.type);
        for (const auto& [v, t] : info.scope) {
          def.params.push_back(v);
          def.param_types.push_back(t);
        }
        def.ret = info.type;
        def.body = make_var(next.next_tag++, y, mark);
        std::vector<ExprPtr> args{site_ptr};
        for (const auto& [v, t] : info.scope) args.push_back(make_var(next.next_tag++, v, mark));
        ExprPtr call = make_call(next.next_tag++, f, std::move(args), mark);
        next = *replace_by_tag(next, site, call);
        next.fns.push_back(std::move(def));
        break;
      }
    }

    ++stats_.stretches;
    ++stats_.iterations;
    ++attempt_in_phase_;
    adopt(std::move(next), Phase::Stretch, site);
    return rec;
  }
  return std::nullopt;
}

// --- rewinding ---------------------------------------------------------------------

std::vector<Tag> Engine::marked_nodes(int kind, int32_t id) const {
  std::vector<Tag> out;
  visit_program(prog_, [&](const ExprPtr& e) {
    bool kind_ok = (kind == 1 && e->kind == ExprKind::Suppose) ||
                   (kind == 2 && e->kind == ExprKind::If) ||
                   (kind == 3 && e->kind == ExprKind::Case) ||
                   (kind == 4 && e->kind == ExprKind::Call);
    if (!kind_ok) return;
    if (std::find(e->origin.begin(), e->origin.end(), id) != e->origin.end())
      out.push_back(e->tag);
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Scores the trial and adopts it when the replacement node's score is at
// least `baseline`. Returns true when adopted.
bool Engine::try_rewind_trial(Program trial, Tag repl_tag, double baseline) {
  ScoreResult trial_scores = score_candidate(trial);
  // "Attains a score at least the baseline": an unevaluated replacement
  // attains no score at all, so it cannot pass.
  if (trial_scores.table.evaluated(repl_tag) &&
      trial_scores.table.score(repl_tag) >= baseline - kScoreEps) {
    if (auto err = typecheck(trial, ctx_))
      throw std::logic_error(std::string("rewind broke typing: ") + err->rule);
    if (auto bad = audit_tags(trial))
      throw std::logic_error("rewind broke tag uniqueness at " + std::to_string(*bad));
    prog_ = std::move(trial);
    scores_ = std::move(trial_scores);
    return true;
  }
  return false;
}

void Engine::apply_rewind_1(const StretchRecord& rec) {
  // Drop each marked suppose whose condition scored no better than the
  // expression itself (a still-True condition always ties it).
  bool changed = false;
  for (Tag t : marked_nodes(1, rec.id)) {
    ExprPtr node = find_node(prog_, t);
    if (!node || node->kind != ExprKind::Suppose) continue;
    double sc = scores_.table.score(node->cond()->tag);
    double se = scores_.table.score(t);
    if (sc <= se + kScoreEps) {
      if (auto replaced = replace_by_tag(prog_, t, node->body())) {
        prog_ = std::move(*replaced);
        changed = true;
      }
    }
  }
  if (changed) adopt(std::move(prog_), Phase::Rewind, kNoTag);
}

void Engine::apply_rewind_2(const StretchRecord& rec) {
  // Demote each marked if back to a suppose over its then-branch when the
  // demoted form scores at least what the if scored.
  for (Tag t : marked_nodes(2, rec.id)) {
    ExprPtr node = find_node(prog_, t);
    if (!node || node->kind != ExprKind::If) continue;
    double baseline = scores_.table.score(t);
    Program trial = prog_;
    Tag sup_tag = trial.next_tag++;
    ExprPtr sup = make_suppose(sup_tag, node->cond(), node->then_branch());
    auto replaced = replace_by_tag(trial, t, sup);
    if (!replaced) continue;
    try_rewind_trial(std::move(*replaced), sup_tag, baseline);
  }
}

void Engine::apply_rewind_3(const StretchRecord& rec) {
  // Collapse each marked case to one of its arms: prefer a non-nullary arm
  // whose body, with the pattern substituted back to the variable, mentions
  // no arm binders; otherwise a nullary arm. Either way the replacement must
  // score at least what the case scored. Failing all arms, keep the case.
  for (Tag t : marked_nodes(3, rec.id)) {
    ExprPtr node = find_node(prog_, t);
    if (!node || node->kind != ExprKind::Case) continue;
    double baseline = scores_.table.score(t);

    bool done = false;
    for (const CaseArm& arm : node->arms) {
      if (arm.binders.empty()) continue;
      Program trial = prog_;
      ExprPtr undone = replace_ctor_app(arm.body, arm.ctor, arm.binders, rec.var, trial.next_tag);
      bool mentions = false;
      for (VarId b : arm.binders)
        if (references_var(undone, b)) mentions = true;
      if (mentions) continue;
      auto replaced = replace_by_tag(trial, t, undone);
      if (!replaced) continue;
      if (try_rewind_trial(std::move(*replaced), undone->tag, baseline)) {
        done = true;
        break;
      }
    }
    if (done) continue;
    for (const CaseArm& arm : node->arms) {
      if (!arm.binders.empty()) continue;
      Program trial = prog_;
      auto replaced = replace_by_tag(trial, t, arm.body);
      if (!replaced) continue;
      if (try_rewind_trial(std::move(*replaced), arm.body->tag, baseline)) break;
    }
  }
}

void Engine::apply_rewind_4(const StretchRecord& rec) {
  // Inline the marked calls of the introduced function, then remove its
  // definition once nothing calls it. A self-referential body blocks the
  // whole rewind.
  const FunctionDef* def = prog_.find_fn(rec.fn);
  if (!def) return;
  if (contains_call(def->body, rec.fn)) return;

  bool changed = false;
  for (Tag t : marked_nodes(4, rec.id)) {
    ExprPtr node = find_node(prog_, t);
    if (!node || node->kind != ExprKind::Call || node->sym != rec.fn) continue;
    def = prog_.find_fn(rec.fn);
    Program next = prog_;
    ExprPtr body = retag(def->body, next.next_tag);
    std::vector<std::pair<VarId, ExprPtr>> subs;
    for (size_t i = 0; i < def->params.size(); ++i)
      subs.emplace_back(def->params[i], node->kids[i]);
    ExprPtr inlined = substitute_vars(body, subs, next.next_tag);
    if (auto replaced = replace_by_tag(next, t, inlined)) {
      prog_ = std::move(*replaced);
      changed = true;
    }
  }

  bool still_called = false;
  for (const auto& d : prog_.fns)
    if (d.name != rec.fn && contains_call(d.body, rec.fn)) still_called = true;
  if (!still_called) {
    std::vector<FunctionDef> kept;
    for (auto& d : prog_.fns)
      if (d.name != rec.fn) kept.push_back(std::move(d));
    prog_.fns = std::move(kept);
    changed = true;
  }
  if (changed) adopt(std::move(prog_), Phase::Rewind, kNoTag);
}

void Engine::rewind(const StretchRecord& rec) {
  ++stats_.rewind_ops;
  ++stats_.iterations;
  ++attempt_in_phase_;
  switch (rec.kind) {
    case 1: apply_rewind_1(rec); break;
    case 2: apply_rewind_2(rec); break;
    case 3: apply_rewind_3(rec); break;
    default: apply_rewind_4(rec); break;
  }
}

// --- the cycle ----------------------------------------------------------------------

void Engine::run_cycle() {
  records_.clear();
  ++cycle_;
  stats_.cycles = cycle_;

  attempt_in_phase_ = 0;
  for (int i = 0; i < cfg_.n_stretch; ++i) {
    if (!imperfect_exists()) break;
    if (auto rec = stretch()) records_.push_back(*rec);
  }

  attempt_in_phase_ = 0;
  for (int j = 0; j < cfg_.n_mutate; ++j) {
    if (!imperfect_exists()) break;
    try_mutation();
  }

  attempt_in_phase_ = 0;
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) rewind(*it);

  // Compression: collect input-output tables from a scoring run, reduce, and
  // rescore when anything changed.
  attempt_in_phase_ = 0;
  IoCollector io;
  ScoreOptions opts;
  opts.eval = cfg_.eval;
  opts.use_oracle = cfg_.use_oracle;
  opts.collect_io = true;
  scores_ = score_program(prog_, ctx_, tc_, pool_, opts, &io, &stats_.assessments);
  if (scores_.perfect && stats_.assessments_to_converge < 0)
    stats_.assessments_to_converge = stats_.assessments;
  Program before = prog_;
  Program after = compress(prog_, ctx_, io, tc_.primary, cfg_.lexpr_enum_depth);
  ++stats_.compress_passes;
  ++stats_.iterations;
  if (compress_audit) compress_audit(before, after, io);
  if (!equal_mod_tags(before, after)) {
    adopt(std::move(after), Phase::Compress, kNoTag);
  } else {
    note_tested(prog_);
  }
}

bool Engine::evolve() {
  while (cycle_ < cfg_.max_cycles) {
    if (scores_.perfect) return true;
    run_cycle();
  }
  return scores_.perfect;
}

EvolveResult evolve(Program initial, const TypingContext& ctx, const TestCriterion& tc,
                    const CycleConfig& cfg, ValuePool& pool, uint64_t seed, LogSink log) {
  Engine eng(std::move(initial), ctx, tc, cfg, pool, seed, std::move(log));
  bool ok = eng.evolve();
  return EvolveResult{ok, eng.program(), eng.stats(), eng.scores().global};
}

}  // namespace tracegp
