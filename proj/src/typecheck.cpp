#include "tracegp/typecheck.hpp"

namespace tracegp {

namespace {

struct Checker {
  const Program& p;
  const TypingContext& ctx;
  std::optional<TypeError> err;

  struct FnSig {
    const std::vector<TypeId>* params;
    TypeId ret;
  };
  std::optional<FnSig> signature(FnId f) const {
    if (const FunctionDef* d = p.find_fn(f)) return FnSig{&d->param_types, d->ret};
    if (const BuiltinFn* b = ctx.find_builtin(f)) return FnSig{&b->params, b->ret};
    return std::nullopt;
  }

  void fail(Tag t, const char* rule, std::string detail) {
    if (!err) err = TypeError{t, rule, std::move(detail)};
  }

  // Returns the derived type or -1 after recording an error.
  TypeId check(const ExprPtr& e, std::vector<std::pair<VarId, TypeId>>& scope) {
    if (err) return -1;
    switch (e->kind) {
      case ExprKind::Var: {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == e->sym) return it->second;
        fail(e->tag, "VarType", "unbound variable " + ctx.vars.name(e->sym));
        return -1;
      }
      case ExprKind::Cons: {
        const CtorDef& cd = ctx.ctor_def(e->sym);
        const char* rule = e->sym == ctx.true_ctor()    ? "TrueType"
                           : e->sym == ctx.false_ctor() ? "FalseType"
                                                        : "ConstructorType";
        if (cd.args.size() != e->kids.size()) {
          fail(e->tag, rule, "constructor arity mismatch for " + ctx.ctors.name(e->sym));
          return -1;
        }
        for (size_t i = 0; i < e->kids.size(); ++i) {
          TypeId a = check(e->kids[i], scope);
          if (a < 0) return -1;
          if (a != cd.args[i]) {
            fail(e->tag, rule, "constructor argument type mismatch");
            return -1;
          }
        }
        return cd.owner;
      }
      case ExprKind::Call: {
        auto sig = signature(e->sym);
        if (!sig) {
          fail(e->tag, "FunctionType", "unknown function " + ctx.fns.name(e->sym));
          return -1;
        }
        if (sig->params->size() != e->kids.size()) {
          fail(e->tag, "FunctionType", "call arity mismatch for " + ctx.fns.name(e->sym));
          return -1;
        }
        for (size_t i = 0; i < e->kids.size(); ++i) {
          TypeId a = check(e->kids[i], scope);
          if (a < 0) return -1;
          if (a != (*sig->params)[i]) {
            fail(e->tag, "FunctionType", "call argument type mismatch");
            return -1;
          }
        }
        return sig->ret;
      }
      case ExprKind::Case: {
        TypeId scrut = check(e->scrutinee(), scope);
        if (scrut < 0) return -1;
        const TypeDef& td = ctx.type_def(scrut);
        std::vector<CtorId> seen;
        TypeId result = -1;
        for (const CaseArm& arm : e->arms) {
          if (ctx.ctor_def(arm.ctor).owner != scrut) {
            fail(e->tag, "CaseType", "arm constructor not of scrutinee type");
            return -1;
          }
          if (std::find(seen.begin(), seen.end(), arm.ctor) != seen.end()) {
            fail(e->tag, "CaseType", "duplicate arm constructor");
            return -1;
          }
          seen.push_back(arm.ctor);
          const CtorDef& cd = ctx.ctor_def(arm.ctor);
          if (cd.args.size() != arm.binders.size()) {
            fail(e->tag, "CaseType", "arm binder count mismatch");
            return -1;
          }
          for (size_t i = 0; i < arm.binders.size(); ++i) {
            for (size_t j = 0; j < i; ++j)
              if (arm.binders[j] == arm.binders[i]) {
                fail(e->tag, "CaseType", "repeated binder in arm");
                return -1;
              }
            for (const auto& [v, t] : scope)
              if (v == arm.binders[i]) {
                fail(e->tag, "CaseType",
                     "binder shadows bound variable " + ctx.vars.name(v));
                return -1;
              }
          }
          size_t base = scope.size();
          for (size_t i = 0; i < arm.binders.size(); ++i)
            scope.emplace_back(arm.binders[i], cd.args[i]);
          TypeId b = check(arm.body, scope);
          scope.resize(base);
          if (b < 0) return -1;
          if (result >= 0 && b != result) {
            fail(e->tag, "CaseType", "arms disagree on result type");
            return -1;
          }
          result = b;
        }
        if (e->arms.empty()) {
          fail(e->tag, "CaseType", "case with no arms");
          return -1;
        }
        (void)td;
        return result;
      }
      case ExprKind::If: {
        TypeId c = check(e->cond(), scope);
        if (c < 0) return -1;
        if (c != ctx.bool_type()) {
          fail(e->tag, "IfType", "condition is not Bool");
          return -1;
        }
        TypeId a = check(e->then_branch(), scope);
        if (a < 0) return -1;
        TypeId b = check(e->else_branch(), scope);
        if (b < 0) return -1;
        if (a != b) {
          fail(e->tag, "IfType", "branches disagree on type");
          return -1;
        }
        return a;
      }
      case ExprKind::Suppose: {
        TypeId c = check(e->cond(), scope);
        if (c < 0) return -1;
        if (c != ctx.bool_type()) {
          fail(e->tag, "SupposeType", "condition is not Bool");
          return -1;
        }
        return check(e->body(), scope);
      }
    }
    return -1;
  }
};

}  // namespace

std::optional<TypeError> typecheck(const Program& p, const TypingContext& ctx) {
  Checker chk{p, ctx, std::nullopt};
  std::vector<FnId> declared;
  for (const auto& d : p.fns) {
    if (std::find(declared.begin(), declared.end(), d.name) != declared.end())
      return TypeError{kNoTag, "Program", "function declared twice: " + ctx.fns.name(d.name)};
    declared.push_back(d.name);
  }
  for (const auto& d : p.fns) {
    if (d.params.size() != d.param_types.size())
      return TypeError{kNoTag, "Program", "parameter list mismatch"};
    std::vector<std::pair<VarId, TypeId>> scope;
    for (size_t i = 0; i < d.params.size(); ++i) scope.emplace_back(d.params[i], d.param_types[i]);
    TypeId got = chk.check(d.body, scope);
    if (chk.err) return chk.err;
    if (got != d.ret)
      return TypeError{d.body->tag, "Program",
                       "body type does not match declared return type of " + ctx.fns.name(d.name)};
  }
  return std::nullopt;
}

std::unordered_map<Tag, SiteInfo> analyze_sites(const Program& p, const TypingContext& ctx) {
  std::unordered_map<Tag, SiteInfo> out;
  for (size_t fi = 0; fi < p.fns.size(); ++fi) {
    const FunctionDef& d = p.fns[fi];
    std::vector<std::pair<VarId, TypeId>> scope;
    for (size_t i = 0; i < d.params.size(); ++i) scope.emplace_back(d.params[i], d.param_types[i]);

    std::function<TypeId(const ExprPtr&, bool, Tag)> go = [&](const ExprPtr& e, bool eq_root,
                                                              Tag root_tag) -> TypeId {
      SiteInfo info;
      info.fn_index = static_cast<int>(fi);
      info.scope = scope;
      info.equation_root = eq_root;
      Tag self_root = eq_root ? e->tag : root_tag;
      info.enclosing_equation_root = self_root;
      TypeId type = -1;
      switch (e->kind) {
        case ExprKind::Var:
          for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == e->sym) { type = it->second; break; }
          break;
        case ExprKind::Cons:
          for (const auto& k : e->kids) go(k, false, self_root);
          type = ctx.ctor_def(e->sym).owner;
          break;
        case ExprKind::Call: {
          for (const auto& k : e->kids) go(k, false, self_root);
          if (const FunctionDef* f = p.find_fn(e->sym)) type = f->ret;
          else if (const BuiltinFn* b = ctx.find_builtin(e->sym)) type = b->ret;
          break;
        }
        case ExprKind::Case: {
          go(e->scrutinee(), false, self_root);
          for (const CaseArm& arm : e->arms) {
            const CtorDef& cd = ctx.ctor_def(arm.ctor);
            size_t base = scope.size();
            for (size_t i = 0; i < arm.binders.size(); ++i)
              scope.emplace_back(arm.binders[i], cd.args[i]);
            type = go(arm.body, eq_root, self_root);
            scope.resize(base);
          }
          break;
        }
        case ExprKind::If: {
          go(e->cond(), false, self_root);
          type = go(e->then_branch(), false, self_root);
          go(e->else_branch(), false, self_root);
          break;
        }
        case ExprKind::Suppose: {
          go(e->cond(), false, self_root);
          type = go(e->body(), false, self_root);
          break;
        }
      }
      info.type = type;
      out.emplace(e->tag, std::move(info));
      return type;
    };
    go(d.body, true, d.body->tag);
  }
  return out;
}

}  // namespace tracegp
