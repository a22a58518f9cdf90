#include "tracegp/gen.hpp"

namespace tracegp {

std::vector<CallableSig> callables_of(const Program& p, const TypingContext& ctx) {
  std::vector<CallableSig> out;
  for (const auto& d : p.fns) out.push_back(CallableSig{d.name, d.param_types, d.ret});
  for (const auto& b : ctx.builtins()) out.push_back(CallableSig{b.id, b.params, b.ret});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

namespace {

// Minimal node count of an expression of this type: a variable if one is in
// scope, otherwise the smallest constructor term.
int min_expr_size(const TypingContext& ctx, const std::vector<std::pair<VarId, TypeId>>& scope,
                  TypeId t) {
  for (const auto& [v, vt] : scope)
    if (vt == t) return 1;
  return ctx.min_value_size(t);
}

// Splits (budget - 1) among children: each child gets its minimum, the
// leftover spread evenly from the front.
std::vector<int> child_budgets(const TypingContext& ctx,
                               const std::vector<std::pair<VarId, TypeId>>& scope,
                               const std::vector<TypeId>& kids, int budget) {
  std::vector<int> mins(kids.size());
  int total_min = 0;
  for (size_t i = 0; i < kids.size(); ++i) {
    mins[i] = min_expr_size(ctx, scope, kids[i]);
    total_min += mins[i];
  }
  int leftover = budget - 1 - total_min;
  std::vector<int> out(kids.size());
  int k = static_cast<int>(kids.size());
  for (size_t i = 0; i < kids.size(); ++i) {
    int share = leftover / k + (static_cast<int>(i) < leftover % k ? 1 : 0);
    out[i] = mins[i] + share;
  }
  return out;
}

}  // namespace

std::optional<ExprPtr> gen_expr(const TypingContext& ctx, const std::vector<CallableSig>& callables,
                                const std::vector<std::pair<VarId, TypeId>>& scope, TypeId target,
                                int budget, Tag& next_tag, Rng& rng) {
  if (budget < 1) return std::nullopt;

  std::vector<VarId> vars;
  for (const auto& [v, t] : scope)
    if (t == target) vars.push_back(v);

  std::vector<CtorId> ctors;
  for (CtorId c : ctx.type_def(target).ctors) {
    const CtorDef& cd = ctx.ctor_def(c);
    int need = 1;
    for (TypeId a : cd.args) need += min_expr_size(ctx, scope, a);
    if (need <= budget) ctors.push_back(c);
  }

  std::vector<const CallableSig*> fns;
  for (const auto& f : callables) {
    if (f.ret != target) continue;
    int need = 1;
    for (TypeId a : f.params) need += min_expr_size(ctx, scope, a);
    if (need <= budget) fns.push_back(&f);
  }

  std::vector<int> kinds;  // 0 var, 1 ctor, 2 call
  if (!vars.empty()) kinds.push_back(0);
  if (!ctors.empty()) kinds.push_back(1);
  if (!fns.empty()) kinds.push_back(2);
  if (kinds.empty()) return std::nullopt;

  switch (kinds[rng.pick(static_cast<int>(kinds.size()))]) {
    case 0:
      return make_var(next_tag++, vars[rng.pick_index(vars.size())]);
    case 1: {
      CtorId c = ctors[rng.pick_index(ctors.size())];
      const CtorDef& cd = ctx.ctor_def(c);
      auto budgets = child_budgets(ctx, scope, cd.args, budget);
      std::vector<ExprPtr> args;
      for (size_t i = 0; i < cd.args.size(); ++i) {
        auto a = gen_expr(ctx, callables, scope, cd.args[i], budgets[i], next_tag, rng);
        if (!a) return std::nullopt;
        args.push_back(std::move(*a));
      }
      return make_cons(next_tag++, c, std::move(args));
    }
    default: {
      const CallableSig* f = fns[rng.pick_index(fns.size())];
      auto budgets = child_budgets(ctx, scope, f->params, budget);
      std::vector<ExprPtr> args;
      for (size_t i = 0; i < f->params.size(); ++i) {
        auto a = gen_expr(ctx, callables, scope, f->params[i], budgets[i], next_tag, rng);
        if (!a) return std::nullopt;
        args.push_back(std::move(*a));
      }
      return make_call(next_tag++, f->id, std::move(args));
    }
  }
}

}  // namespace tracegp
