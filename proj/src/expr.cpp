#include "tracegp/expr.hpp"

namespace tracegp {

namespace {
ExprPtr make(ExprKind k, Tag t, int32_t sym, std::vector<ExprPtr> kids, std::vector<CaseArm> arms,
             OriginSet origin) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->tag = t;
  e->sym = sym;
  e->kids = std::move(kids);
  e->arms = std::move(arms);
  e->origin = std::move(origin);
  return e;
}
}  // namespace

ExprPtr make_var(Tag t, VarId v, OriginSet origin) {
  return make(ExprKind::Var, t, v, {}, {}, std::move(origin));
}
ExprPtr make_cons(Tag t, CtorId c, std::vector<ExprPtr> args, OriginSet origin) {
  return make(ExprKind::Cons, t, c, std::move(args), {}, std::move(origin));
}
ExprPtr make_call(Tag t, FnId f, std::vector<ExprPtr> args, OriginSet origin) {
  return make(ExprKind::Call, t, f, std::move(args), {}, std::move(origin));
}
ExprPtr make_case(Tag t, ExprPtr scrutinee, std::vector<CaseArm> arms, OriginSet origin) {
  return make(ExprKind::Case, t, -1, {std::move(scrutinee)}, std::move(arms), std::move(origin));
}
ExprPtr make_if(Tag t, ExprPtr c, ExprPtr a, ExprPtr b, OriginSet origin) {
  return make(ExprKind::If, t, -1, {std::move(c), std::move(a), std::move(b)}, {},
              std::move(origin));
}
ExprPtr make_suppose(Tag t, ExprPtr c, ExprPtr body, OriginSet origin) {
  return make(ExprKind::Suppose, t, -1, {std::move(c), std::move(body)}, {}, std::move(origin));
}

bool is_literal_ctor(const Expr& e, CtorId c) {
  return e.kind == ExprKind::Cons && e.sym == c && e.kids.empty();
}

void visit(const ExprPtr& e, const std::function<void(const ExprPtr&)>& fn) {
  fn(e);
  for (const auto& k : e->kids) visit(k, fn);
  for (const auto& arm : e->arms) visit(arm.body, fn);
}

void visit_program(const Program& p, const std::function<void(const ExprPtr&)>& fn) {
  for (const auto& d : p.fns) visit(d.body, fn);
}

const Expr* find_by_tag(const ExprPtr& e, Tag t) {
  if (e->tag == t) return e.get();
  for (const auto& k : e->kids)
    if (const Expr* r = find_by_tag(k, t)) return r;
  for (const auto& arm : e->arms)
    if (const Expr* r = find_by_tag(arm.body, t)) return r;
  return nullptr;
}

const Expr* find_by_tag(const Program& p, Tag t) {
  for (const auto& d : p.fns)
    if (const Expr* r = find_by_tag(d.body, t)) return r;
  return nullptr;
}

int node_count(const ExprPtr& e) {
  int n = 0;
  visit(e, [&n](const ExprPtr&) { ++n; });
  return n;
}

int node_count(const Program& p) {
  int n = 0;
  for (const auto& d : p.fns) n += node_count(d.body);
  return n;
}

Tag max_tag(const Program& p) {
  Tag m = 0;
  visit_program(p, [&m](const ExprPtr& e) { m = std::max(m, e->tag); });
  return m;
}

bool equal_mod_tags(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind || a->sym != b->sym) return false;
  if (a->kids.size() != b->kids.size() || a->arms.size() != b->arms.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!equal_mod_tags(a->kids[i], b->kids[i])) return false;
  for (size_t i = 0; i < a->arms.size(); ++i) {
    if (a->arms[i].ctor != b->arms[i].ctor || a->arms[i].binders != b->arms[i].binders)
      return false;
    if (!equal_mod_tags(a->arms[i].body, b->arms[i].body)) return false;
  }
  return true;
}

bool equal_mod_tags(const Program& a, const Program& b) {
  if (a.fns.size() != b.fns.size()) return false;
  for (size_t i = 0; i < a.fns.size(); ++i) {
    const auto& fa = a.fns[i];
    const auto& fb = b.fns[i];
    if (fa.name != fb.name || fa.params != fb.params || fa.param_types != fb.param_types ||
        fa.ret != fb.ret)
      return false;
    if (!equal_mod_tags(fa.body, fb.body)) return false;
  }
  return true;
}

ExprPtr replace_by_tag(const ExprPtr& e, Tag t, const ExprPtr& repl) {
  if (e->tag == t) return repl;
  for (size_t i = 0; i < e->kids.size(); ++i) {
    if (ExprPtr r = replace_by_tag(e->kids[i], t, repl)) {
      auto copy = std::make_shared<Expr>(*e);
      copy->kids[i] = std::move(r);
      return copy;
    }
  }
  for (size_t i = 0; i < e->arms.size(); ++i) {
    if (ExprPtr r = replace_by_tag(e->arms[i].body, t, repl)) {
      auto copy = std::make_shared<Expr>(*e);
      copy->arms[i].body = std::move(r);
      return copy;
    }
  }
  return nullptr;
}

std::optional<Program> replace_by_tag(const Program& p, Tag t, const ExprPtr& repl) {
  for (size_t i = 0; i < p.fns.size(); ++i) {
    if (ExprPtr r = replace_by_tag(p.fns[i].body, t, repl)) {
      Program q = p;
      q.fns[i].body = std::move(r);
      return q;
    }
  }
  return std::nullopt;
}

ExprPtr retag(const ExprPtr& e, Tag& next) {
  auto copy = std::make_shared<Expr>(*e);
  copy->tag = next++;
  for (auto& k : copy->kids) k = retag(k, next);
  for (auto& arm : copy->arms) arm.body = retag(arm.body, next);
  return copy;
}

ExprPtr fresh_tags(Program& p, const ExprPtr& e) { return retag(e, p.next_tag); }

ExprPtr substitute_var(const ExprPtr& e, VarId v, const ExprPtr& replacement, Tag& next) {
  bool first_use = true;
  std::function<ExprPtr(const ExprPtr&)> go = [&](const ExprPtr& node) -> ExprPtr {
    if (node->kind == ExprKind::Var && node->sym == v) {
      if (first_use) {
        first_use = false;
        return replacement;
      }
      return retag(replacement, next);
    }
    if (node->kids.empty() && node->arms.empty()) return node;
    auto copy = std::make_shared<Expr>(*node);
    for (auto& k : copy->kids) k = go(k);
    for (auto& arm : copy->arms) arm.body = go(arm.body);
    return copy;
  };
  return go(e);
}

ExprPtr substitute_vars(const ExprPtr& e, const std::vector<std::pair<VarId, ExprPtr>>& subs,
                        Tag& next) {
  std::vector<bool> used(subs.size(), false);
  std::function<ExprPtr(const ExprPtr&)> go = [&](const ExprPtr& node) -> ExprPtr {
    if (node->kind == ExprKind::Var) {
      for (size_t i = 0; i < subs.size(); ++i) {
        if (subs[i].first == node->sym) {
          if (!used[i]) {
            used[i] = true;
            return subs[i].second;
          }
          return retag(subs[i].second, next);
        }
      }
      return node;
    }
    if (node->kids.empty() && node->arms.empty()) return node;
    auto copy = std::make_shared<Expr>(*node);
    for (auto& k : copy->kids) k = go(k);
    for (auto& arm : copy->arms) arm.body = go(arm.body);
    return copy;
  };
  return go(e);
}

ExprPtr replace_ctor_app(const ExprPtr& e, CtorId ctor, const std::vector<VarId>& binders,
                         VarId v, Tag& next) {
  auto matches = [&](const Expr& node) {
    if (node.kind != ExprKind::Cons || node.sym != ctor) return false;
    if (node.kids.size() != binders.size()) return false;
    for (size_t i = 0; i < binders.size(); ++i)
      if (node.kids[i]->kind != ExprKind::Var || node.kids[i]->sym != binders[i]) return false;
    return true;
  };
  std::function<ExprPtr(const ExprPtr&)> go = [&](const ExprPtr& node) -> ExprPtr {
    if (matches(*node)) return make_var(next++, v);
    if (node->kids.empty() && node->arms.empty()) return node;
    auto copy = std::make_shared<Expr>(*node);
    for (auto& k : copy->kids) k = go(k);
    for (auto& arm : copy->arms) arm.body = go(arm.body);
    return copy;
  };
  return go(e);
}

bool references_var(const ExprPtr& e, VarId v) {
  if (e->kind == ExprKind::Var && e->sym == v) return true;
  for (const auto& k : e->kids)
    if (references_var(k, v)) return true;
  for (const auto& arm : e->arms)
    if (references_var(arm.body, v)) return true;
  return false;
}

bool contains_call(const ExprPtr& e, FnId f) {
  if (e->kind == ExprKind::Call && e->sym == f) return true;
  for (const auto& k : e->kids)
    if (contains_call(k, f)) return true;
  for (const auto& arm : e->arms)
    if (contains_call(arm.body, f)) return true;
  return false;
}

bool contains_var_node(const ExprPtr& e) {
  if (e->kind == ExprKind::Var) return true;
  for (const auto& k : e->kids)
    if (contains_var_node(k)) return true;
  for (const auto& arm : e->arms)
    if (contains_var_node(arm.body)) return true;
  return false;
}

std::optional<Tag> audit_tags(const Program& p) {
  std::unordered_map<Tag, int> seen;
  std::optional<Tag> bad;
  visit_program(p, [&](const ExprPtr& e) {
    if (bad) return;
    if (e->tag <= 0 || e->tag >= p.next_tag || seen[e->tag]++ > 0) bad = e->tag;
  });
  return bad;
}

}  // namespace tracegp
