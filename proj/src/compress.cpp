#include "tracegp/compress.hpp"

namespace tracegp {

namespace {

struct Compressor {
  const TypingContext& ctx;
  const IoCollector& io;
  const std::unordered_map<Tag, SiteInfo>& sites;
  Program& prog;  // for fresh tags
  CompressStats* stats;

  // The smallest linear expression conforming to e's observed table, or null
  // when the table is empty (dead code is left alone) or nothing conforms.
  ExprPtr linear_candidate(const ExprPtr& e) {
    const auto& table = io.entries(e->tag);
    if (table.empty()) return nullptr;
    const SiteInfo& info = sites.at(e->tag);
    LValue w = lvalue_of(table[0].sigma, table[0].result);
    for (size_t i = 1; i < table.size(); ++i)
      w = meet(w, lvalue_of(table[i].sigma, table[i].result));
    std::vector<VarId> names;
    for (const auto& [v, t] : info.scope) names.push_back(v);
    auto best = min_lexpr(w, names);
    return best ? *best : nullptr;
  }

  ExprPtr go(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Cons: {
        auto copy = std::make_shared<Expr>(*e);
        for (auto& k : copy->kids) k = go(k);
        return copy;
      }
      case ExprKind::Suppose: {
        ExprPtr c = go(e->cond());
        ExprPtr b = go(e->body());
        if (!contains_var_node(c)) {
          if (stats) ++stats->supposes_dropped;
          return b;
        }
        auto copy = std::make_shared<Expr>(*e);
        copy->kids[0] = std::move(c);
        copy->kids[1] = std::move(b);
        return copy;
      }
      default:
        break;
    }
    // Var / Call / Case / If: first try a linear replacement.
    if (ExprPtr lin = linear_candidate(e)) {
      if (node_count(lin) <= node_count(e)) {
        if (equal_mod_tags(lin, e)) return e;  // already minimal; keep tags
        if (stats) ++stats->linear_replacements;
        return retag(lin, prog.next_tag);
      }
    }
    switch (e->kind) {
      case ExprKind::If: {
        ExprPtr c = go(e->cond());
        ExprPtr a = go(e->then_branch());
        ExprPtr b = go(e->else_branch());
        if (is_literal_ctor(*c, ctx.true_ctor())) {
          if (stats) ++stats->ifs_folded;
          return a;
        }
        if (is_literal_ctor(*c, ctx.false_ctor())) {
          if (stats) ++stats->ifs_folded;
          return b;
        }
        auto copy = std::make_shared<Expr>(*e);
        copy->kids = {std::move(c), std::move(a), std::move(b)};
        return copy;
      }
      case ExprKind::Call: {
        auto copy = std::make_shared<Expr>(*e);
        for (auto& k : copy->kids) k = go(k);
        return copy;
      }
      default:
        return e;  // Var and Case stay as they are
    }
  }
};

}  // namespace

Program compress(const Program& p, const TypingContext& ctx, const IoCollector& io, FnId primary,
                 int enum_depth, CompressStats* stats) {
  (void)enum_depth;  // empty tables are skipped, so no unconstrained enumeration happens
  auto sites = analyze_sites(p, ctx);
  Program out = p;
  Compressor comp{ctx, io, sites, out, stats};
  for (auto& d : out.fns) d.body = comp.go(d.body);

  // Drop functions unreachable from the primary in the call graph.
  std::vector<FnId> keep{primary};
  for (size_t i = 0; i < keep.size(); ++i) {
    const FunctionDef* d = out.find_fn(keep[i]);
    if (!d) continue;
    visit(d->body, [&](const ExprPtr& e) {
      if (e->kind == ExprKind::Call &&
          std::find(keep.begin(), keep.end(), e->sym) == keep.end() && out.find_fn(e->sym))
        keep.push_back(e->sym);
    });
  }
  std::vector<FunctionDef> kept;
  for (auto& d : out.fns)
    if (std::find(keep.begin(), keep.end(), d.name) != keep.end()) kept.push_back(std::move(d));
  if (stats) stats->fns_removed += static_cast<int>(out.fns.size() - kept.size());
  out.fns = std::move(kept);
  return out;
}

}  // namespace tracegp
