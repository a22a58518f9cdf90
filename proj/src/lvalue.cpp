#include "tracegp/lvalue.hpp"

namespace tracegp {

LValue lvalue_of(std::span<const Value* const> sigma, const Value* v) {
  LValue w;
  w.ctor = v->ctor;
  w.self = true;
  for (size_t i = 0; i < sigma.size(); ++i)
    if (sigma[i] == v) w.vars |= 1ull << i;
  w.children.reserve(v->children.size());
  for (const Value* c : v->children) w.children.push_back(lvalue_of(sigma, c));
  return w;
}

LValue meet(const LValue& a, const LValue& b) {
  LValue out;
  out.vars = a.vars & b.vars;
  out.ctor = a.ctor;
  if (a.ctor == b.ctor) {
    out.self = a.self && b.self;
    out.children.reserve(a.children.size());
    for (size_t i = 0; i < a.children.size(); ++i)
      out.children.push_back(meet(a.children[i], b.children[i]));
  } else {
    out.self = false;
    out.children = a.children;
  }
  return out;
}

namespace {

// All tuples over the given per-position alternatives, last position varying
// fastest. Alternatives must all be non-empty.
void cartesian(const std::vector<std::vector<ExprPtr>>& alts,
               const std::function<void(std::vector<ExprPtr>)>& emit) {
  std::vector<size_t> idx(alts.size(), 0);
  while (true) {
    std::vector<ExprPtr> tuple;
    tuple.reserve(alts.size());
    for (size_t i = 0; i < alts.size(); ++i) tuple.push_back(alts[i][idx[i]]);
    emit(std::move(tuple));
    size_t i = alts.size();
    while (i > 0 && ++idx[i - 1] == alts[i - 1].size()) idx[--i] = 0;
    if (i == 0) return;
  }
}

}  // namespace

std::vector<ExprPtr> expand_lexprs(const LValue& w, const std::vector<VarId>& var_names) {
  std::vector<ExprPtr> out;
  for (size_t i = 0; i < var_names.size(); ++i)
    if (w.vars & (1ull << i)) out.push_back(make_var(kNoTag, var_names[i]));
  if (w.self) {
    std::vector<std::vector<ExprPtr>> per_child;
    bool any_empty = false;
    for (const LValue& c : w.children) {
      per_child.push_back(expand_lexprs(c, var_names));
      if (per_child.back().empty()) any_empty = true;
    }
    if (per_child.empty()) {
      out.push_back(make_cons(kNoTag, w.ctor, {}));
    } else if (!any_empty) {
      cartesian(per_child, [&](std::vector<ExprPtr> args) {
        out.push_back(make_cons(kNoTag, w.ctor, std::move(args)));
      });
    }
  }
  return out;
}

std::optional<ExprPtr> min_lexpr(const LValue& w, const std::vector<VarId>& var_names) {
  // A variable solution always has one node and beats (or ties with) any
  // constructor application; ties prefer the lowest variable index, matching
  // the enumeration order of expand_lexprs.
  for (size_t i = 0; i < var_names.size(); ++i)
    if (w.vars & (1ull << i)) return make_var(kNoTag, var_names[i]);
  if (!w.self) return std::nullopt;
  std::vector<ExprPtr> args;
  args.reserve(w.children.size());
  for (const LValue& c : w.children) {
    auto a = min_lexpr(c, var_names);
    if (!a) return std::nullopt;
    args.push_back(std::move(*a));
  }
  return make_cons(kNoTag, w.ctor, std::move(args));
}

std::vector<ExprPtr> enumerate_linear(const TypingContext& ctx,
                                      const std::vector<std::pair<VarId, TypeId>>& scope,
                                      TypeId type, int max_depth) {
  std::vector<TypeId> types;
  std::function<void(TypeId)> reach = [&](TypeId t) {
    if (std::find(types.begin(), types.end(), t) != types.end()) return;
    types.push_back(t);
    for (CtorId c : ctx.type_def(t).ctors)
      for (TypeId a : ctx.ctor_def(c).args) reach(a);
  };
  reach(type);

  // prev[t] after k rounds: all linear expressions of constructor depth <= k
  // (variables count as depth 0). Each round's sets are duplicate-free.
  std::unordered_map<TypeId, std::vector<ExprPtr>> prev;
  for (int d = 0; d < max_depth; ++d) {
    std::unordered_map<TypeId, std::vector<ExprPtr>> level;
    for (TypeId t : types) {
      std::vector<ExprPtr>& out = level[t];
      for (const auto& [v, vt] : scope)
        if (vt == t) out.push_back(make_var(kNoTag, v));
      for (CtorId c : ctx.type_def(t).ctors) {
        const CtorDef& cd = ctx.ctor_def(c);
        std::vector<std::vector<ExprPtr>> per_child;
        bool any_empty = false;
        for (TypeId a : cd.args) {
          per_child.push_back(prev[a]);
          if (per_child.back().empty()) any_empty = true;
        }
        if (per_child.empty()) {
          out.push_back(make_cons(kNoTag, c, {}));
        } else if (!any_empty) {
          cartesian(per_child, [&](std::vector<ExprPtr> args) {
            out.push_back(make_cons(kNoTag, c, std::move(args)));
          });
        }
      }
    }
    prev = std::move(level);
  }

  std::vector<ExprPtr> result = prev[type];
  std::stable_sort(result.begin(), result.end(), [](const ExprPtr& a, const ExprPtr& b) {
    return node_count(a) < node_count(b);
  });
  return result;
}

std::vector<ExprPtr> solve_linear(const TypingContext& ctx,
                                  const std::vector<IoCollector::Entry>& table,
                                  const std::vector<std::pair<VarId, TypeId>>& scope, TypeId type,
                                  int enum_depth) {
  if (table.empty()) return enumerate_linear(ctx, scope, type, enum_depth);
  LValue w = lvalue_of(table[0].sigma, table[0].result);
  for (size_t i = 1; i < table.size(); ++i)
    w = meet(w, lvalue_of(table[i].sigma, table[i].result));
  std::vector<VarId> names;
  names.reserve(scope.size());
  for (const auto& [v, t] : scope) names.push_back(v);
  return expand_lexprs(w, names);
}

}  // namespace tracegp
