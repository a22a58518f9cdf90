#pragma once

#include "tracegp/eval.hpp"
#include "tracegp/typecheck.hpp"

namespace tracegp {

// Working representation of the linear-expression solver: a value tree whose
// nodes carry a subset of {self, x_1..x_n}. `self` means the node may be
// written as a constructor application; a variable index i means the whole
// subtree equals the value bound to x_i in every context seen so far.
struct LValue {
  CtorId ctor;
  bool self = false;
  uint64_t vars = 0;  // bit i-1 set = variable x_i (1-based, n <= 64)
  std::vector<LValue> children;
};

// w(sigma, v): marks each node with self plus every variable bound to that
// exact subtree value.
LValue lvalue_of(std::span<const Value* const> sigma, const Value* v);

// Meet: the induced solution sets intersect, l(meet(a,b)) = l(a) & l(b).
LValue meet(const LValue& a, const LValue& b);

// All linear expressions denoted by an l-value, as untagged expression
// skeletons (tag 0 everywhere; retag before inserting into a program).
// Deterministic order: variables by ascending index first, then constructor
// applications in child-major order. The set is always finite.
std::vector<ExprPtr> expand_lexprs(const LValue& w, const std::vector<VarId>& var_names);

// Smallest solution by node count (ties: variables before constructors,
// lower variable index first). nullopt when the solution set is empty.
std::optional<ExprPtr> min_lexpr(const LValue& w, const std::vector<VarId>& var_names);

// Breadth-first enumeration of all linear expressions of a type, smallest
// node count first, up to the given constructor depth. Used when an
// input-output table is empty (no constraints).
std::vector<ExprPtr> enumerate_linear(const TypingContext& ctx,
                                      const std::vector<std::pair<VarId, TypeId>>& scope,
                                      TypeId type, int max_depth);

// The full solver: all linear expressions conforming to the table. With a
// non-empty table this is expand_lexprs over the meet of the per-entry
// l-values; with an empty table it falls back to bounded enumeration.
std::vector<ExprPtr> solve_linear(const TypingContext& ctx,
                                  const std::vector<IoCollector::Entry>& table,
                                  const std::vector<std::pair<VarId, TypeId>>& scope, TypeId type,
                                  int enum_depth = 6);

}  // namespace tracegp
