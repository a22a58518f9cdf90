#include "tracegp/print.hpp"

#include <sstream>

namespace tracegp {

std::string type_name(const TypingContext& ctx, TypeId t) { return ctx.types.name(t); }

namespace {

void print_expr_rec(const TypingContext& ctx, const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::Var:
      out += ctx.vars.name(e->sym);
      break;
    case ExprKind::Cons:
    case ExprKind::Call: {
      out += e->kind == ExprKind::Cons ? ctx.ctors.name(e->sym) : ctx.fns.name(e->sym);
      if (e->kind == ExprKind::Call || !e->kids.empty()) {
        out += "(";
        for (size_t i = 0; i < e->kids.size(); ++i) {
          if (i) out += ", ";
          print_expr_rec(ctx, e->kids[i], out);
        }
        out += ")";
      }
      break;
    }
    case ExprKind::Case: {
      out += "case ";
      print_expr_rec(ctx, e->scrutinee(), out);
      out += " of ";
      for (size_t i = 0; i < e->arms.size(); ++i) {
        if (i) out += "; ";
        const CaseArm& arm = e->arms[i];
        out += ctx.ctors.name(arm.ctor);
        if (!arm.binders.empty()) {
          out += "(";
          for (size_t j = 0; j < arm.binders.size(); ++j) {
            if (j) out += ", ";
            out += ctx.vars.name(arm.binders[j]);
          }
          out += ")";
        }
        out += " -> ";
        print_expr_rec(ctx, arm.body, out);
      }
      out += " end";
      break;
    }
    case ExprKind::If:
      out += "if ";
      print_expr_rec(ctx, e->cond(), out);
      out += " then ";
      print_expr_rec(ctx, e->then_branch(), out);
      out += " else ";
      print_expr_rec(ctx, e->else_branch(), out);
      out += " end";
      break;
    case ExprKind::Suppose:
      out += "suppose ";
      print_expr_rec(ctx, e->cond(), out);
      out += " then ";
      print_expr_rec(ctx, e->body(), out);
      out += " end";
      break;
  }
}

}  // namespace

std::string print_expr(const TypingContext& ctx, const ExprPtr& e) {
  std::string out;
  print_expr_rec(ctx, e, out);
  return out;
}

std::string print_function(const TypingContext& ctx, const FunctionDef& f, bool with_signature) {
  std::string out;
  if (with_signature) {
    out += ctx.fns.name(f.name) + " : (";
    for (size_t i = 0; i < f.param_types.size(); ++i) {
      if (i) out += ", ";
      out += ctx.types.name(f.param_types[i]);
    }
    out += ") -> " + ctx.types.name(f.ret) + "\n";
  }
  out += ctx.fns.name(f.name) + "(";
  for (size_t i = 0; i < f.params.size(); ++i) {
    if (i) out += ", ";
    out += ctx.vars.name(f.params[i]);
  }
  out += ") = ";
  out += print_expr(ctx, f.body);
  return out;
}

std::string print_program(const TypingContext& ctx, const Program& p, bool with_signatures) {
  std::string out;
  for (const auto& f : p.fns) {
    out += print_function(ctx, f, with_signatures);
    out += "\n";
  }
  return out;
}

std::string print_type_def(const TypingContext& ctx, TypeId t) {
  const TypeDef& td = ctx.type_def(t);
  std::string out = "type " + ctx.types.name(t) + " = ";
  for (size_t i = 0; i < td.ctors.size(); ++i) {
    if (i) out += " | ";
    const CtorDef& cd = ctx.ctor_def(td.ctors[i]);
    out += ctx.ctors.name(cd.id);
    if (!cd.args.empty()) {
      out += "(";
      for (size_t j = 0; j < cd.args.size(); ++j) {
        if (j) out += ", ";
        out += ctx.types.name(cd.args[j]);
      }
      out += ")";
    }
  }
  return out;
}

}  // namespace tracegp
