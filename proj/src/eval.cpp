#include "tracegp/eval.hpp"

#include <map>
#include <ostream>
#include <set>

namespace tracegp {

TraceRef trace_leaf(Arena& arena, Tag t, int depth) {
  return arena.make<TraceNode>(TraceNode::Leaf, t, depth, nullptr, nullptr);
}

TraceRef trace_concat(Arena& arena, TraceRef x, TraceRef y) {
  if (!x) return y;
  if (!y) return x;
  return arena.make<TraceNode>(TraceNode::Concat, kNoTag, 0, x, y);
}

TraceRef trace_prepend(Arena& arena, Tag t, int depth, TraceRef rest) {
  return trace_concat(arena, trace_leaf(arena, t, depth), rest);
}

TraceRef trace_negate(Arena& arena, TraceRef t) {
  if (!t) return nullptr;
  return arena.make<TraceNode>(TraceNode::Neg, kNoTag, 0, t, nullptr);
}

void trace_for_each(TraceRef t, const std::function<void(Tag, bool, int)>& fn) {
  if (!t) return;
  // Iterative in-order walk; the bool is the negation parity of the path.
  std::vector<std::pair<TraceRef, bool>> work{{t, false}};
  while (!work.empty()) {
    auto [node, neg] = work.back();
    work.pop_back();
    switch (node->kind) {
      case TraceNode::Leaf:
        fn(node->tag, neg, node->depth);
        break;
      case TraceNode::Concat:
        work.emplace_back(node->b, neg);
        work.emplace_back(node->a, neg);
        break;
      case TraceNode::Neg:
        work.emplace_back(node->a, !neg);
        break;
    }
  }
}

std::vector<std::tuple<Tag, bool, int>> trace_entries(TraceRef t) {
  std::vector<std::tuple<Tag, bool, int>> out;
  trace_for_each(t, [&out](Tag tag, bool neg, int depth) { out.emplace_back(tag, neg, depth); });
  return out;
}

TracedValue* traced_from_value(Arena& arena, const Value* v) {
  TracedValue** kids = arena.make_array<TracedValue*>(v->children.size());
  for (size_t i = 0; i < v->children.size(); ++i)
    kids[i] = traced_from_value(arena, v->children[i]);
  return arena.make<TracedValue>(v->ctor, v, nullptr, kids,
                                 static_cast<int32_t>(v->children.size()));
}

const char* fail_kind_name(FailKind k) {
  switch (k) {
    case FailKind::CallLimit: return "call-limit";
    case FailKind::RecursionViolation: return "recursion-violation";
    case FailKind::MissingCaseArm: return "missing-case-arm";
  }
  return "?";
}

// --- IoCollector -----------------------------------------------------------

const std::vector<IoCollector::Entry> IoCollector::empty_;

void IoCollector::add(Tag t, std::vector<const Value*> sigma, const Value* result) {
  auto& seen = seen_[t];
  std::vector<const Value*> key = sigma;
  key.push_back(result);
  if (!seen.insert(std::move(key)).second) return;
  tables_[t].push_back(Entry{std::move(sigma), result});
}

const std::vector<IoCollector::Entry>& IoCollector::entries(Tag t) const {
  auto it = tables_.find(t);
  return it == tables_.end() ? empty_ : it->second;
}

// --- guard -------------------------------------------------------------------

bool guard_call(const std::vector<const Value*>& args,
                const std::vector<std::vector<const Value*>>& frames_of_f) {
  if (frames_of_f.empty()) return true;
  for (size_t i = 0; i < args.size(); ++i) {
    bool smaller_everywhere = true;
    for (const auto& frame : frames_of_f) {
      if (!(args[i]->size < frame[i]->size)) {
        smaller_everywhere = false;
        break;
      }
    }
    if (smaller_everywhere) return true;
  }
  return false;
}

// --- Evaluator ----------------------------------------------------------------

bool Evaluator::guard_allows(FnId f, const std::vector<const Value*>& args) const {
  std::vector<std::vector<const Value*>> frames;
  for (const auto& fr : stack_)
    if (fr.fn == f) frames.push_back(fr.args);
  return guard_call(args, frames);
}

TracedValue* Evaluator::lookup(VarId v) const {
  const Frame& fr = stack_.back();
  for (auto it = fr.bindings.rbegin(); it != fr.bindings.rend(); ++it)
    if (it->first == v) return it->second;
  throw std::logic_error("unbound variable during evaluation");
}

TracedValue* Evaluator::with_trace(const TracedValue* v, TraceRef trace) {
  return arena_.make<TracedValue>(v->ctor, v->untagged, trace, v->children, v->n_children);
}

void Evaluator::dump_rule(const char* rule, Tag t, CtorId head) {
  if (dump_) *dump_ << rule << " " << t << " " << ctx_.ctors.name(head) << "\n";
}

EvalOutcome Evaluator::eval_call(FnId fn, std::span<const Value* const> args) {
  const FunctionDef* def = prog_.find_fn(fn);
  if (!def) throw std::logic_error("eval_call: unknown function");
  stack_.clear();
  expr_stack_.clear();
  events_.clear();
  calls_ = 0;

  Frame frame;
  frame.fn = fn;
  frame.depth = 1;
  for (size_t i = 0; i < args.size(); ++i) {
    frame.bindings.emplace_back(def->params[i], traced_from_value(arena_, args[i]));
    frame.args.push_back(args[i]);
  }
  stack_.push_back(std::move(frame));
  ++calls_;

  EvalOutcome out;
  try {
    out.value = eval(def->body);
  } catch (const Abort& abort) {
    Failure f;
    f.kind = abort.kind;
    if (abort.kind == FailKind::CallLimit) {
      f.punished = events_;
    } else {
      f.punished = expr_stack_;
    }
    out.failure = std::move(f);
  }
  return out;
}

TracedValue* Evaluator::eval(const ExprPtr& e) {
  const int depth = stack_.back().depth;
  expr_stack_.emplace_back(e->tag, depth);
  events_.emplace_back(e->tag, depth);

  TracedValue* result = nullptr;
  switch (e->kind) {
    case ExprKind::Var: {
      TracedValue* v = lookup(e->sym);
      result = with_trace(v, trace_prepend(arena_, e->tag, depth, v->trace));
      dump_rule("Var", e->tag, result->ctor);
      break;
    }
    case ExprKind::Cons: {
      TracedValue** kids = arena_.make_array<TracedValue*>(e->kids.size());
      const Value** kid_vals = arena_.make_array<const Value*>(e->kids.size());
      for (size_t i = 0; i < e->kids.size(); ++i) {
        kids[i] = eval(e->kids[i]);
        kid_vals[i] = kids[i]->untagged;
      }
      const Value* u = pool_.make(
          static_cast<CtorId>(e->sym),
          std::span<const Value* const>(kid_vals, e->kids.size()));
      result = arena_.make<TracedValue>(static_cast<CtorId>(e->sym), u,
                                        trace_leaf(arena_, e->tag, depth), kids,
                                        static_cast<int32_t>(e->kids.size()));
      dump_rule("Cons", e->tag, result->ctor);
      break;
    }
    case ExprKind::Call: {
      result = eval_fn_call(*e);
      dump_rule("Call", e->tag, result->ctor);
      break;
    }
    case ExprKind::Case: {
      TracedValue* scrut = eval(e->scrutinee());
      const CaseArm* arm = nullptr;
      for (const auto& a : e->arms)
        if (a.ctor == scrut->ctor) { arm = &a; break; }
      if (!arm) throw Abort{FailKind::MissingCaseArm};
      Frame& fr = stack_.back();
      size_t base = fr.bindings.size();
      for (size_t i = 0; i < arm->binders.size(); ++i)
        fr.bindings.emplace_back(arm->binders[i], scrut->children[i]);
      TracedValue* body = eval(arm->body);
      stack_.back().bindings.resize(base);
      TraceRef t = trace_prepend(arena_, e->tag, depth,
                                 trace_concat(arena_, scrut->trace, body->trace));
      result = with_trace(body, t);
      dump_rule("Case", e->tag, result->ctor);
      break;
    }
    case ExprKind::If: {
      TracedValue* c = eval(e->cond());
      bool is_true = c->ctor == ctx_.true_ctor();
      TracedValue* branch = eval(is_true ? e->then_branch() : e->else_branch());
      TraceRef t =
          trace_prepend(arena_, e->tag, depth, trace_concat(arena_, c->trace, branch->trace));
      result = with_trace(branch, t);
      dump_rule(is_true ? "IfTrue" : "IfFalse", e->tag, result->ctor);
      break;
    }
    case ExprKind::Suppose: {
      TracedValue* c = eval(e->cond());
      bool is_true = c->ctor == ctx_.true_ctor();
      TracedValue* body = eval(e->body());
      TraceRef cond_trace = is_true ? c->trace : trace_negate(arena_, c->trace);
      TraceRef t =
          trace_prepend(arena_, e->tag, depth, trace_concat(arena_, cond_trace, body->trace));
      result = with_trace(body, t);
      dump_rule(is_true ? "SupposeTrue" : "SupposeFalse", e->tag, result->ctor);
      break;
    }
  }

  if (io_) {
    const Frame& fr = stack_.back();
    std::vector<const Value*> sigma;
    sigma.reserve(fr.bindings.size());
    for (const auto& [v, tv] : fr.bindings) sigma.push_back(tv->untagged);
    io_->add(e->tag, std::move(sigma), result->untagged);
  }
  expr_stack_.pop_back();
  return result;
}

TracedValue* Evaluator::eval_fn_call(const Expr& e) {
  const int depth = stack_.back().depth;
  std::vector<TracedValue*> arg_values;
  std::vector<const Value*> arg_untagged;
  for (const auto& a : e.kids) {
    TracedValue* v = eval(a);
    arg_values.push_back(v);
    arg_untagged.push_back(v->untagged);
  }

  if (++calls_ > cfg_.call_limit) throw Abort{FailKind::CallLimit};

  if (const BuiltinFn* b = ctx_.find_builtin(e.sym)) {
    const Value* out = b->native(pool_, arg_untagged);
    // The result of an opaque builtin may depend on every argument, so the
    // argument traces flow into the result's root trace.
    TraceRef t = nullptr;
    for (const TracedValue* a : arg_values) t = trace_concat(arena_, t, a->trace);
    t = trace_prepend(arena_, e.tag, depth, t);
    return with_trace(traced_from_value(arena_, out), t);
  }

  const FunctionDef* def = prog_.find_fn(e.sym);
  if (!def) throw std::logic_error("call to unknown function");

  if (cfg_.recursion_guard && !guard_allows(e.sym, arg_untagged))
    throw Abort{FailKind::RecursionViolation};

  if (oracle_ && e.sym == oracle_->primary && oracle_->table) {
    // Training data only answers calls that descend pointwise below every
    // active frame of the primary: all arguments no larger, at least one
    // strictly smaller. The weaker guard condition alone would also answer
    // argument permutations like f(m, n) inside f(n, m), turning degenerate
    // self-referential bodies into well-scoring local optima.
    bool descends = true;
    for (const auto& fr : stack_) {
      if (fr.fn != e.sym) continue;
      bool all_le = true, one_lt = false;
      for (size_t i = 0; i < arg_untagged.size(); ++i) {
        if (arg_untagged[i]->size > fr.args[i]->size) all_le = false;
        if (arg_untagged[i]->size < fr.args[i]->size) one_lt = true;
      }
      if (!(all_le && one_lt)) {
        descends = false;
        break;
      }
    }
    if (descends) {
      auto it = oracle_->table->find(arg_untagged);
      if (it != oracle_->table->end()) {
        TraceRef t = trace_leaf(arena_, e.tag, depth);
        return with_trace(traced_from_value(arena_, it->second), t);
      }
    }
  }

  // The body runs in a fresh frame binding only the parameters; the caller's
  // variables are not visible.
  Frame frame;
  frame.fn = e.sym;
  frame.depth = depth + 1;
  for (size_t i = 0; i < arg_values.size(); ++i)
    frame.bindings.emplace_back(def->params[i], arg_values[i]);
  frame.args = arg_untagged;
  stack_.push_back(std::move(frame));
  TracedValue* body = eval(def->body);
  stack_.pop_back();
  return with_trace(body, trace_prepend(arena_, e.tag, depth, body->trace));
}

}  // namespace tracegp
