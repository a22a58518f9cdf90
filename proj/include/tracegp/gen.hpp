#pragma once

#include "tracegp/typecheck.hpp"

namespace tracegp {

// Signature view of something callable from generated code: a program
// function or a builtin.
struct CallableSig {
  FnId id;
  std::vector<TypeId> params;
  TypeId ret;
};

std::vector<CallableSig> callables_of(const Program& p, const TypingContext& ctx);

// Random expression generator used by mutation. Produces a well-typed
// expression of `target` with at most `budget` nodes, built only from the
// given variables, constructors of the context, and `callables`. Node kind is
// chosen uniformly among {variable, constructor, call} that are feasible at
// the remaining budget; the remaining budget is split evenly among children.
// Never emits case/if/suppose: those structures enter programs only through
// stretches. Returns nullopt when no expression of the type fits the budget.
std::optional<ExprPtr> gen_expr(const TypingContext& ctx, const std::vector<CallableSig>& callables,
                                const std::vector<std::pair<VarId, TypeId>>& scope, TypeId target,
                                int budget, Tag& next_tag, Rng& rng);

}  // namespace tracegp
