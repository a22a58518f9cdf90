#pragma once

#include "tracegp/expr.hpp"
#include "tracegp/value.hpp"

namespace tracegp {

// Parses a block of type definitions into the context, e.g.
//   type ZList = Cons(Z, ZList) | Nil
void parse_type_defs(TypingContext& ctx, std::string_view text);

struct ParsedSignature {
  std::string name;
  std::vector<TypeId> params;
  TypeId ret;
};
// "name : (T1, T2) -> T" (parens optional for a single parameter type).
ParsedSignature parse_signature(const TypingContext& ctx, std::string_view text);

// Parses one function definition "f(x, y) = expr" against a declared
// signature. Fresh tags are assigned from the program counter; case binders
// that would shadow are alpha-renamed.
void parse_function_into(Program& p, const TypingContext& ctx, std::string_view text,
                         const std::vector<TypeId>& param_types, TypeId ret);

// Parses a whole program: a sequence of "sig" + "def" lines. Used by tests.
Program parse_program(const TypingContext& ctx,
                      const std::vector<std::pair<std::string, std::string>>& sig_and_defs);

// Parses a value of the given type. Accepts constructor applications,
// integer literals (for the binary-int types when installed), and [a, b, c]
// list sugar for Cons/Nil types.
const Value* parse_value(const TypingContext& ctx, ValuePool& pool, std::string_view text,
                         TypeId expected);

}  // namespace tracegp
