#pragma once

#include <algorithm>
#include <memory>

#include "tracegp/types.hpp"

namespace tracegp {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind : uint8_t { Var, Cons, Call, Case, If, Suppose };

struct CaseArm {
  CtorId ctor;
  std::vector<VarId> binders;
  ExprPtr body;
};

// Sorted set of stretch ids marking which stretches a node originates from.
// Empty for almost every node.
using OriginSet = std::vector<int32_t>;

// Immutable tagged expression node. Shared between programs; transformations
// path-copy. `kids` holds, by kind:
//   Cons/Call: arguments   If: {cond, then, else}   Suppose: {cond, body}
//   Case: {scrutinee}      Var: {}
struct Expr {
  ExprKind kind;
  Tag tag = kNoTag;
  int32_t sym = -1;  // VarId / CtorId / FnId depending on kind
  std::vector<ExprPtr> kids;
  std::vector<CaseArm> arms;  // Case only
  OriginSet origin;

  const ExprPtr& cond() const { return kids[0]; }
  const ExprPtr& then_branch() const { return kids[1]; }
  const ExprPtr& else_branch() const { return kids[2]; }
  const ExprPtr& body() const { return kids[1]; }       // Suppose
  const ExprPtr& scrutinee() const { return kids[0]; }  // Case
};

ExprPtr make_var(Tag t, VarId v, OriginSet origin = {});
ExprPtr make_cons(Tag t, CtorId c, std::vector<ExprPtr> args, OriginSet origin = {});
ExprPtr make_call(Tag t, FnId f, std::vector<ExprPtr> args, OriginSet origin = {});
ExprPtr make_case(Tag t, ExprPtr scrutinee, std::vector<CaseArm> arms, OriginSet origin = {});
ExprPtr make_if(Tag t, ExprPtr c, ExprPtr a, ExprPtr b, OriginSet origin = {});
ExprPtr make_suppose(Tag t, ExprPtr c, ExprPtr body, OriginSet origin = {});

bool is_literal_ctor(const Expr& e, CtorId c);

struct FunctionDef {
  FnId name;
  std::vector<VarId> params;
  std::vector<TypeId> param_types;
  TypeId ret;
  ExprPtr body;
};

// A program plus the counters that make fresh tags / generated names unique
// across its whole transformation lineage. Tags are never reused even after
// nodes are deleted.
struct Program {
  std::vector<FunctionDef> fns;
  Tag next_tag = 1;
  int32_t next_gen_var = 1;
  int32_t next_gen_fn = 0;
  int32_t next_stretch_id = 1;

  const FunctionDef* find_fn(FnId f) const {
    for (const auto& d : fns)
      if (d.name == f) return &d;
    return nullptr;
  }
};

// --- traversal -------------------------------------------------------------

// Preorder visit of every node (including case-arm bodies).
void visit(const ExprPtr& e, const std::function<void(const ExprPtr&)>& fn);
void visit_program(const Program& p, const std::function<void(const ExprPtr&)>& fn);

const Expr* find_by_tag(const ExprPtr& e, Tag t);
const Expr* find_by_tag(const Program& p, Tag t);

int node_count(const ExprPtr& e);
int node_count(const Program& p);
Tag max_tag(const Program& p);

// Structural equality ignoring tags and origin marks.
bool equal_mod_tags(const ExprPtr& a, const ExprPtr& b);
bool equal_mod_tags(const Program& a, const Program& b);

// --- transformation --------------------------------------------------------

// Returns a copy of `e` with the node tagged `t` replaced by `repl`.
// Null when `t` does not occur in `e`.
ExprPtr replace_by_tag(const ExprPtr& e, Tag t, const ExprPtr& repl);
// Replaces within whichever function body contains the tag.
std::optional<Program> replace_by_tag(const Program& p, Tag t, const ExprPtr& repl);

// Retags every node from `next` (monotonically increasing), preserving
// structure and origin marks.
ExprPtr retag(const ExprPtr& e, Tag& next);

// fresh_tags: retag from the program's lineage counter and advance it.
ExprPtr fresh_tags(Program& p, const ExprPtr& e);

// Substitutes `replacement` for every occurrence of variable `v`. Each
// occurrence beyond the first gets fresh tags so tag uniqueness is preserved.
ExprPtr substitute_var(const ExprPtr& e, VarId v, const ExprPtr& replacement, Tag& next);

// Simultaneous substitution of several variables (used by call inlining;
// avoids capturing variables that occur inside the substituted expressions).
ExprPtr substitute_vars(const ExprPtr& e, const std::vector<std::pair<VarId, ExprPtr>>& subs,
                        Tag& next);

// Replaces every occurrence of the pattern expression `ctor(binders...)`
// (arguments exactly those variables, in order) with a fresh-tagged Var(v).
ExprPtr replace_ctor_app(const ExprPtr& e, CtorId ctor, const std::vector<VarId>& binders,
                         VarId v, Tag& next);

bool references_var(const ExprPtr& e, VarId v);
bool contains_call(const ExprPtr& e, FnId f);
bool contains_var_node(const ExprPtr& e);

// Checks that every tag in the program is positive, unique, and below
// next_tag. Returns the offending tag, or nullopt when the audit passes.
std::optional<Tag> audit_tags(const Program& p);

}  // namespace tracegp
