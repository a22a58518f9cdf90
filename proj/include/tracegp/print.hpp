#pragma once

#include "tracegp/expr.hpp"

namespace tracegp {

// Canonical surface syntax, round-trip stable with the parser. Tags and
// origin marks are not printed, so the printed form doubles as the canonical
// representation used for program deduplication.
std::string print_expr(const TypingContext& ctx, const ExprPtr& e);
std::string print_function(const TypingContext& ctx, const FunctionDef& f, bool with_signature = true);
std::string print_program(const TypingContext& ctx, const Program& p, bool with_signatures = true);
std::string print_type_def(const TypingContext& ctx, TypeId t);

std::string type_name(const TypingContext& ctx, TypeId t);

}  // namespace tracegp
