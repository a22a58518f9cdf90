#include "tracegp/scoring.hpp"

#include <algorithm>

namespace tracegp {

// --- assessments ------------------------------------------------------------

ScoredValue assess_exact(const Value* expected, const Value* actual) {
  ScoredValue out;
  out.score = (expected != nullptr && expected == actual) ? 1.0 : 0.0;
  out.children.reserve(actual->children.size());
  for (size_t i = 0; i < actual->children.size(); ++i) {
    const Value* exp_child =
        (expected && i < expected->children.size()) ? expected->children[i] : nullptr;
    out.children.push_back(assess_exact(exp_child, actual->children[i]));
  }
  return out;
}

namespace {

// Fraction of matching aligned bits from position `from`, over the longer of
// the two remaining lengths. 1.0 iff the suffixes are identical.
double bit_suffix_score(const std::vector<int>& a, const std::vector<int>& b, size_t from) {
  size_t la = a.size() > from ? a.size() - from : 0;
  size_t lb = b.size() > from ? b.size() - from : 0;
  size_t len = std::max(la, lb);
  if (len == 0) return 1.0;
  size_t match = 0;
  for (size_t k = 0; k < std::min(la, lb); ++k)
    if (a[from + k] == b[from + k]) ++match;
  return static_cast<double>(match) / static_cast<double>(len);
}

void assess_bits(const IntCodec& codec, const std::vector<int>& exp_bits,
                 const std::vector<int>& act_bits, size_t pos, const Value* actual,
                 ScoredValue& out) {
  out.score = bit_suffix_score(act_bits, exp_bits, pos);
  if (actual->ctor != codec.one) {
    out.children.resize(1);
    assess_bits(codec, exp_bits, act_bits, pos + 1, actual->children[0], out.children[0]);
  }
}

}  // namespace

ScoredValue assess_int(const IntCodec& codec, const Value* expected, const Value* actual) {
  ScoredValue out;
  if (expected == actual) {
    // Perfect subtree: all ones.
    std::function<void(const Value*, ScoredValue&)> ones = [&](const Value* v, ScoredValue& s) {
      s.score = 1.0;
      s.children.resize(v->children.size());
      for (size_t i = 0; i < v->children.size(); ++i) ones(v->children[i], s.children[i]);
    };
    ones(actual, out);
    return out;
  }
  if (actual->ctor != expected->ctor) {
    // Sign / constructor mismatch: zero everywhere below.
    return assess_exact(nullptr, actual);
  }
  if (actual->ctor == codec.zero) {
    out.score = 1.0;
    return out;
  }
  std::vector<int> exp_bits = codec.bits_of(expected->children[0]);
  std::vector<int> act_bits = codec.bits_of(actual->children[0]);
  out.score = bit_suffix_score(act_bits, exp_bits, 0);
  out.children.resize(1);
  assess_bits(codec, exp_bits, act_bits, 0, actual->children[0], out.children[0]);
  return out;
}

ScoredValue assess_list(const ListCodec& codec, const ElemAssessor& elem, const Value* expected,
                        const Value* actual) {
  ScoredValue out;
  bool spine_match = expected != nullptr && expected->ctor == actual->ctor;
  out.score = spine_match ? 1.0 : 0.0;
  if (actual->ctor == codec.cons) {
    out.children.resize(2);
    const Value* exp_head = spine_match ? expected->children[0] : nullptr;
    const Value* exp_tail = spine_match ? expected->children[1] : nullptr;
    out.children[0] = exp_head ? elem(exp_head, actual->children[0])
                               : assess_exact(nullptr, actual->children[0]);
    out.children[1] = assess_list(codec, elem, exp_tail, actual->children[1]);
  }
  return out;
}

ScoredValue TestCriterion::assess(int k, const Value* actual) const {
  const Value* exp = expected[k];
  switch (kind) {
    case AssessKind::Exact:
      return assess_exact(exp, actual);
    case AssessKind::Int:
      return assess_int(int_codec, exp, actual);
    case AssessKind::ListExact:
      return assess_list(list_codec, [](const Value* e, const Value* a) {
        return assess_exact(e, a);
      }, exp, actual);
    case AssessKind::ListInt:
      return assess_list(list_codec,
                         [this](const Value* e, const Value* a) {
                           return assess_int(int_codec, e, a);
                         },
                         exp, actual);
  }
  return assess_exact(exp, actual);
}

// --- score table --------------------------------------------------------------

std::vector<Tag> ScoreTable::evaluated_tags() const {
  std::vector<Tag> out;
  out.reserve(cells_.size());
  for (const auto& [t, c] : cells_)
    if (c.den > 0) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

// --- scoring pass --------------------------------------------------------------

namespace {

struct NodeTally {
  double sum = 0;
  long count = 0;
  bool perfect = true;
};

void accumulate(const TracedValue* w, const ScoredValue& s, ScoreTable& table, NodeTally& tally) {
  tally.sum += s.score;
  tally.count += 1;
  if (s.score != 1.0) tally.perfect = false;
  trace_for_each(w->trace, [&](Tag t, bool neg, int depth) {
    double weight = 1.0 / static_cast<double>(depth);
    table.add(t, neg ? 1.0 - s.score : s.score, weight);
  });
  for (int32_t i = 0; i < w->n_children; ++i) accumulate(w->children[i], s.children[i], table, tally);
}

}  // namespace

ScoreResult score_program(const Program& p, const TypingContext& ctx, const TestCriterion& tc,
                          ValuePool& pool, const ScoreOptions& opts, IoCollector* io_out,
                          long* assessment_counter) {
  if (assessment_counter) ++*assessment_counter;
  ScoreResult res;
  NodeTally tally;
  Arena arena;
  Evaluator ev(ctx, p, pool, arena, opts.eval);
  RecursionOracle oracle{tc.primary, &tc.oracle};
  if (opts.use_oracle && tc.use_oracle && !tc.oracle.empty()) ev.set_oracle(&oracle);
  if (io_out && opts.collect_io) ev.set_io_collector(io_out);
  if (opts.trace_dump) ev.set_trace_dump(opts.trace_dump);

  for (size_t k = 0; k < tc.inputs.size(); ++k) {
    EvalOutcome out = ev.eval_call(tc.primary, tc.inputs[k]);
    if (out.ok()) {
      ScoredValue assessed = tc.assess(static_cast<int>(k), out.value->untagged);
      accumulate(out.value, assessed, res.table, tally);
    } else {
      ++res.failed_inputs;
      tally.count += 1;  // a failed case counts as one zero-scored node
      tally.perfect = false;
      for (const auto& [t, depth] : out.failure->punished)
        res.table.add(t, 0.0, 1.0 / static_cast<double>(depth));
    }
    arena.reset();
  }

  res.global = tally.count > 0 ? tally.sum / static_cast<double>(tally.count) : 0.0;
  res.perfect = tally.perfect && res.failed_inputs == 0 && !tc.inputs.empty();
  if (res.perfect) res.global = 1.0;
  return res;
}

std::optional<std::pair<Tag, Tag>> check_suppose_lemma(const Program& p, const TypingContext& ctx,
                                                       const TestCriterion& tc, ValuePool& pool,
                                                       double tol) {
  ScoreResult res = score_program(p, ctx, tc, pool);
  std::optional<std::pair<Tag, Tag>> bad;
  visit_program(p, [&](const ExprPtr& e) {
    if (bad || e->kind != ExprKind::Suppose) return;
    if (!is_literal_ctor(*e->cond(), ctx.true_ctor())) return;
    Tag cond_tag = e->cond()->tag;
    Tag sup_tag = e->tag;
    // Both evaluated or both not.
    if (res.table.evaluated(cond_tag) != res.table.evaluated(sup_tag)) {
      bad = std::make_pair(cond_tag, sup_tag);
      return;
    }
    if (std::abs(res.table.score(cond_tag) - res.table.score(sup_tag)) > tol)
      bad = std::make_pair(cond_tag, sup_tag);
  });
  return bad;
}

}  // namespace tracegp
