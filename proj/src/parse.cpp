#include "tracegp/parse.hpp"

#include <cctype>

namespace tracegp {

namespace {

struct Token {
  enum Kind { Ident, Int, Punct, End } kind;
  std::string text;
  long long ival = 0;
  int line = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  bool at(const char* punct) const { return tok_.kind == Token::Punct && tok_.text == punct; }
  bool at_ident(const char* word) const { return tok_.kind == Token::Ident && tok_.text == word; }
  void expect(const char* punct) {
    if (!at(punct)) fail(std::string("expected '") + punct + "', got '" + tok_.text + "'");
    advance();
  }
  void expect_ident(const char* word) {
    if (!at_ident(word)) fail(std::string("expected '") + word + "', got '" + tok_.text + "'");
    advance();
  }
  std::string take_ident() {
    if (tok_.kind != Token::Ident) fail("expected identifier, got '" + tok_.text + "'");
    return take().text;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(tok_.line, msg); }
  bool done() const { return tok_.kind == Token::End; }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') { ++line_; ++pos_; continue; }
      if (isspace(static_cast<unsigned char>(c))) { ++pos_; continue; }
      if (c == '#') {  // comment to end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    tok_.line = line_;
    if (pos_ >= src_.size()) {
      tok_ = Token{Token::End, "<eof>", 0, line_};
      return;
    }
    char c = src_[pos_];
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
              src_[pos_] == '\''))
        ++pos_;
      tok_ = Token{Token::Ident, std::string(src_.substr(start, pos_ - start)), 0, line_};
      return;
    }
    if (isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      size_t start = pos_;
      if (c == '-') ++pos_;
      while (pos_ < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      Token t{Token::Int, std::string(src_.substr(start, pos_ - start)), 0, line_};
      t.ival = std::stoll(t.text);
      tok_ = t;
      return;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      pos_ += 2;
      tok_ = Token{Token::Punct, "->", 0, line_};
      return;
    }
    ++pos_;
    tok_ = Token{Token::Punct, std::string(1, c), 0, line_};
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  Token tok_;
};

bool is_keyword(const std::string& s) {
  return s == "case" || s == "of" || s == "if" || s == "then" || s == "else" || s == "end" ||
         s == "suppose" || s == "type";
}

TypeId resolve_type(const TypingContext& ctx, Lexer& lex, const std::string& name) {
  auto t = ctx.types.find(name);
  if (!t) lex.fail("unknown type " + name);
  return *t;
}

struct ExprParser {
  const TypingContext& ctx;
  Lexer& lex;
  Tag& next_tag;
  // Active bindings, innermost last. Shadowing binders are alpha-renamed to a
  // fresh primed name at construction time.
  std::vector<std::pair<std::string, VarId>> scope;

  VarId lookup_var(const std::string& name) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == name) return it->second;
    return ctx.vars.intern(name);  // let the typechecker report unbound uses
  }

  ExprPtr parse() {
    if (lex.at_ident("case")) return parse_case();
    if (lex.at_ident("if")) return parse_if();
    if (lex.at_ident("suppose")) return parse_suppose();
    Token t = lex.take();
    if (t.kind != Token::Ident || is_keyword(t.text)) lex.fail("expected expression");
    bool upper = isupper(static_cast<unsigned char>(t.text[0]));
    std::vector<ExprPtr> args;
    bool has_parens = lex.at("(");
    if (has_parens) {
      lex.expect("(");
      if (!lex.at(")")) {
        args.push_back(parse());
        while (lex.at(",")) {
          lex.expect(",");
          args.push_back(parse());
        }
      }
      lex.expect(")");
    }
    if (upper) {
      auto c = ctx.ctors.find(t.text);
      if (!c) lex.fail("unknown constructor " + t.text);
      return make_cons(next_tag++, *c, std::move(args));
    }
    if (has_parens) {
      FnId f = ctx.fns.intern(t.text);
      return make_call(next_tag++, f, std::move(args));
    }
    return make_var(next_tag++, lookup_var(t.text));
  }

  ExprPtr parse_case() {
    lex.expect_ident("case");
    ExprPtr scrut = parse();
    lex.expect_ident("of");
    std::vector<CaseArm> arms;
    while (true) {
      std::string cname = lex.take_ident();
      auto c = ctx.ctors.find(cname);
      if (!c) lex.fail("unknown constructor " + cname);
      CaseArm arm;
      arm.ctor = *c;
      size_t base = scope.size();
      if (lex.at("(")) {
        lex.expect("(");
        while (!lex.at(")")) {
          std::string v = lex.take_ident();
          std::string bind_name = v;
          for (const auto& [n, id] : scope)
            if (n == v) { bind_name = v + "'"; break; }
          while (std::any_of(scope.begin(), scope.end(),
                             [&](const auto& s) { return s.first == bind_name; }))
            bind_name += "'";
          VarId id = ctx.vars.intern(bind_name);
          arm.binders.push_back(id);
          scope.emplace_back(v, id);  // source name maps to the renamed id
          if (lex.at(",")) lex.expect(",");
        }
        lex.expect(")");
      }
      lex.expect("->");
      arm.body = parse();
      scope.resize(base);
      arms.push_back(std::move(arm));
      if (lex.at(";")) {
        lex.expect(";");
        continue;
      }
      break;
    }
    lex.expect_ident("end");
    Tag t = next_tag++;
    return make_case(t, std::move(scrut), std::move(arms));
  }

  ExprPtr parse_if() {
    lex.expect_ident("if");
    ExprPtr c = parse();
    lex.expect_ident("then");
    ExprPtr a = parse();
    lex.expect_ident("else");
    ExprPtr b = parse();
    lex.expect_ident("end");
    return make_if(next_tag++, std::move(c), std::move(a), std::move(b));
  }

  ExprPtr parse_suppose() {
    lex.expect_ident("suppose");
    ExprPtr c = parse();
    lex.expect_ident("then");
    ExprPtr b = parse();
    lex.expect_ident("end");
    return make_suppose(next_tag++, std::move(c), std::move(b));
  }
};

}  // namespace

void parse_type_defs(TypingContext& ctx, std::string_view text) {
  Lexer lex(text);
  // Two passes so mutually recursive types can reference each other: first
  // declare the type names, then the constructors.
  struct RawCtor {
    std::string name;
    std::vector<std::string> args;
  };
  struct RawType {
    std::string name;
    std::vector<RawCtor> ctors;
  };
  std::vector<RawType> raw;
  while (!lex.done()) {
    lex.expect_ident("type");
    RawType rt;
    rt.name = lex.take_ident();
    lex.expect("=");
    while (true) {
      RawCtor rc;
      rc.name = lex.take_ident();
      if (lex.at("(")) {
        lex.expect("(");
        while (!lex.at(")")) {
          rc.args.push_back(lex.take_ident());
          if (lex.at(",")) lex.expect(",");
        }
        lex.expect(")");
      }
      rt.ctors.push_back(std::move(rc));
      if (lex.at("|")) {
        lex.expect("|");
        continue;
      }
      break;
    }
    raw.push_back(std::move(rt));
  }
  for (const auto& rt : raw) ctx.add_type(rt.name);
  for (const auto& rt : raw) {
    TypeId owner = *ctx.types.find(rt.name);
    for (const auto& rc : rt.ctors) {
      std::vector<TypeId> args;
      for (const auto& a : rc.args) {
        auto t = ctx.types.find(a);
        if (!t) throw ParseError(1, "unknown type " + a + " in constructor " + rc.name);
        args.push_back(*t);
      }
      ctx.add_ctor(rc.name, owner, std::move(args));
    }
  }
}

ParsedSignature parse_signature(const TypingContext& ctx, std::string_view text) {
  Lexer lex(text);
  ParsedSignature sig;
  sig.name = lex.take_ident();
  lex.expect(":");
  if (lex.at("(")) {
    lex.expect("(");
    while (!lex.at(")")) {
      sig.params.push_back(resolve_type(ctx, lex, lex.take_ident()));
      if (lex.at(",")) lex.expect(",");
    }
    lex.expect(")");
  } else {
    sig.params.push_back(resolve_type(ctx, lex, lex.take_ident()));
  }
  lex.expect("->");
  sig.ret = resolve_type(ctx, lex, lex.take_ident());
  return sig;
}

void parse_function_into(Program& p, const TypingContext& ctx, std::string_view text,
                         const std::vector<TypeId>& param_types, TypeId ret) {
  Lexer lex(text);
  std::string fname = lex.take_ident();
  FnId fid = ctx.fns.intern(fname);
  FunctionDef def;
  def.name = fid;
  def.param_types = param_types;
  def.ret = ret;
  lex.expect("(");
  while (!lex.at(")")) {
    std::string v = lex.take_ident();
    def.params.push_back(ctx.vars.intern(v));
    if (lex.at(",")) lex.expect(",");
  }
  lex.expect(")");
  if (def.params.size() != param_types.size())
    lex.fail("parameter count does not match signature of " + fname);
  lex.expect("=");
  ExprParser ep{ctx, lex, p.next_tag, {}};
  for (VarId v : def.params) ep.scope.emplace_back(ctx.vars.name(v), v);
  def.body = ep.parse();
  if (!lex.done()) lex.fail("trailing input after function body");
  p.fns.push_back(std::move(def));
}

Program parse_program(const TypingContext& ctx,
                      const std::vector<std::pair<std::string, std::string>>& sig_and_defs) {
  Program p;
  for (const auto& [sig_text, def_text] : sig_and_defs) {
    ParsedSignature sig = parse_signature(ctx, sig_text);
    parse_function_into(p, ctx, def_text, sig.params, sig.ret);
  }
  return p;
}

namespace {

const Value* parse_value_rec(const TypingContext& ctx, ValuePool& pool, Lexer& lex,
                             TypeId expected) {
  IntCodec ic = IntCodec::lookup(ctx);
  if (lex.peek().kind == Token::Int) {
    if (!ic.present() || expected != ic.z) lex.fail("integer literal for non-integer type");
    return ic.encode(pool, lex.take().ival);
  }
  if (lex.at("[")) {
    lex.expect("[");
    const TypeDef& td = ctx.type_def(expected);
    CtorId cons = -1, nil = -1;
    for (CtorId c : td.ctors) {
      const CtorDef& cd = ctx.ctor_def(c);
      if (cd.args.size() == 2 && cd.args[1] == expected) cons = c;
      if (cd.args.empty()) nil = c;
    }
    if (cons < 0 || nil < 0) lex.fail("list literal for non-list type");
    TypeId elem = ctx.ctor_def(cons).args[0];
    std::vector<const Value*> items;
    while (!lex.at("]")) {
      items.push_back(parse_value_rec(ctx, pool, lex, elem));
      if (lex.at(",")) lex.expect(",");
    }
    lex.expect("]");
    const Value* v = pool.make(nil);
    for (auto it = items.rbegin(); it != items.rend(); ++it) v = pool.make(cons, {*it, v});
    return v;
  }
  std::string name = lex.take_ident();
  auto c = ctx.ctors.find(name);
  if (!c) lex.fail("unknown constructor " + name);
  const CtorDef& cd = ctx.ctor_def(*c);
  if (cd.owner != expected)
    lex.fail("constructor " + name + " does not build a " + ctx.types.name(expected));
  std::vector<const Value*> args;
  if (lex.at("(")) {
    lex.expect("(");
    size_t i = 0;
    while (!lex.at(")")) {
      if (i >= cd.args.size()) lex.fail("too many arguments to " + name);
      args.push_back(parse_value_rec(ctx, pool, lex, cd.args[i++]));
      if (lex.at(",")) lex.expect(",");
    }
    lex.expect(")");
  }
  if (args.size() != cd.args.size()) lex.fail("wrong argument count for " + name);
  return pool.make(*c, std::span<const Value* const>(args.data(), args.size()));
}

}  // namespace

const Value* parse_value(const TypingContext& ctx, ValuePool& pool, std::string_view text,
                         TypeId expected) {
  Lexer lex(text);
  const Value* v = parse_value_rec(ctx, pool, lex, expected);
  if (!lex.done()) lex.fail("trailing input after value");
  return v;
}

}  // namespace tracegp
