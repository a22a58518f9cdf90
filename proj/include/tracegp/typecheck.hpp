#pragma once

#include "tracegp/expr.hpp"

namespace tracegp {

struct TypeError {
  Tag tag;
  std::string rule;
  std::string detail;
};

// Checks every function body against its declared return type under the
// rules TrueType ... SupposeType, plus the structural stipulations: unique
// function names, disjoint case arms, distinct arm binders, no shadowing.
// Call targets may be program functions or context builtins.
std::optional<TypeError> typecheck(const Program& p, const TypingContext& ctx);

// Per-node static information gathered in one pass.
struct SiteInfo {
  TypeId type = -1;
  int fn_index = -1;
  // Variables in scope, in binding order (params first, then case binders
  // outermost-first). Matches the evaluator's frame binding order.
  std::vector<std::pair<VarId, TypeId>> scope;
  // True for function body roots and, recursively, arm bodies of case
  // expressions sitting at such roots.
  bool equation_root = false;
  // Tag of the nearest enclosing equation root (ancestor or self).
  Tag enclosing_equation_root = kNoTag;
};

// Requires a well-typed program.
std::unordered_map<Tag, SiteInfo> analyze_sites(const Program& p, const TypingContext& ctx);

}  // namespace tracegp
