#include "tracegp/problem.hpp"

#include <fstream>
#include <sstream>

#include "tracegp/print.hpp"

namespace tracegp {

namespace {

// --- native builtins ----------------------------------------------------------

const Value* native_not(const TypingContext& ctx, ValuePool& pool,
                        std::span<const Value* const> args) {
  CtorId c = args[0]->ctor;
  return pool.make(c == ctx.true_ctor() ? ctx.false_ctor() : ctx.true_ctor());
}

struct NativeDef {
  const char* name;
  // params/ret spelled with type names; resolved when installed.
  std::vector<const char*> params;
  const char* ret;
};

// Installs a named native into the context. Signatures use the standard
// names: Z for binary integers, Bool for booleans.
bool install_native(TypingContext& ctx, const std::string& name) {
  IntCodec ic = IntCodec::lookup(ctx);
  if (name == "not") {
    ctx.add_builtin("not", {ctx.bool_type()}, ctx.bool_type(),
                    [&ctx](ValuePool& pool, std::span<const Value* const> args) {
                      return native_not(ctx, pool, args);
                    });
    return true;
  }
  if (name == "leq") {
    if (!ic.present()) return false;
    ctx.add_builtin("leq", {ic.z, ic.z}, ctx.bool_type(),
                    [&ctx, ic](ValuePool& pool, std::span<const Value* const> args) {
                      long long a = ic.decode(args[0]).value();
                      long long b = ic.decode(args[1]).value();
                      return pool.make(a <= b ? ctx.true_ctor() : ctx.false_ctor());
                    });
    return true;
  }
  if (name == "plus") {
    if (!ic.present()) return false;
    ctx.add_builtin("plus", {ic.z, ic.z}, ic.z,
                    [ic](ValuePool& pool, std::span<const Value* const> args) {
                      long long a = ic.decode(args[0]).value();
                      long long b = ic.decode(args[1]).value();
                      return ic.encode(pool, a + b);
                    });
    return true;
  }
  return false;
}

// --- input grids ----------------------------------------------------------------

std::vector<long long> int_range(long long lo, long long hi) {
  std::vector<long long> out;
  for (long long v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

// All integer lists of length <= max_len over [lo, hi], shortest first. The
// set is closed under tails, which keeps the recursion oracle well covered.
std::vector<std::vector<long long>> int_lists(long long lo, long long hi, int max_len) {
  std::vector<std::vector<long long>> out{{}};
  size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i)
      for (long long v = lo; v <= hi; ++v) {
        auto xs = out[i];
        xs.insert(xs.begin(), v);
        out.push_back(std::move(xs));
      }
    level_begin = level_end;
  }
  return out;
}

const Value* make_int_list(ValuePool& pool, const IntCodec& ic, const ListCodec& lc,
                           const std::vector<long long>& xs) {
  std::vector<const Value*> items;
  for (long long v : xs) items.push_back(ic.encode(pool, v));
  return lc.encode(pool, items);
}

void fill_oracle(TestCriterion& tc) {
  for (size_t k = 0; k < tc.inputs.size(); ++k) tc.oracle[tc.inputs[k]] = tc.expected[k];
}

struct IntProblemParts {
  std::shared_ptr<TypingContext> ctx;
  IntCodec ic;
  ListCodec lc;  // present when with_list
};

IntProblemParts int_problem_context(bool with_list) {
  IntProblemParts parts;
  parts.ctx = std::make_shared<TypingContext>();
  parts.ic = IntCodec::install(*parts.ctx);
  if (with_list) parts.lc = ListCodec::install(*parts.ctx, "ZList", parts.ic.z);
  return parts;
}

ProblemInstance list_to_int_problem(ValuePool& pool, const std::string& name,
                                    const std::string& builtin,
                                    const std::function<long long(const std::vector<long long>&)>& fn,
                                    long long lo, long long hi, int max_len,
                                    AssessKind kind = AssessKind::Int) {
  auto parts = int_problem_context(true);
  if (!builtin.empty()) install_native(*parts.ctx, builtin);
  ProblemInstance inst;
  inst.name = name;
  inst.ctx = parts.ctx;
  inst.initial = parse_program(
      *parts.ctx, {{name + " : (ZList) -> Z", name + "(xs) = Zero"}});
  TestCriterion& tc = inst.criterion;
  tc.primary = *parts.ctx->fns.find(name);
  tc.param_types = {parts.lc.list};
  tc.ret = parts.ic.z;
  tc.kind = kind;
  tc.int_codec = parts.ic;
  for (const auto& xs : int_lists(lo, hi, max_len)) {
    tc.inputs.push_back({make_int_list(pool, parts.ic, parts.lc, xs)});
    tc.expected.push_back(parts.ic.encode(pool, fn(xs)));
  }
  fill_oracle(tc);
  return inst;
}

ProblemInstance list_to_list_problem(
    ValuePool& pool, const std::string& name, const std::string& builtin,
    const std::function<std::vector<long long>(const std::vector<long long>&)>& fn, long long lo,
    long long hi, int max_len, AssessKind kind = AssessKind::ListInt) {
  auto parts = int_problem_context(true);
  if (!builtin.empty()) install_native(*parts.ctx, builtin);
  ProblemInstance inst;
  inst.name = name;
  inst.ctx = parts.ctx;
  inst.initial =
      parse_program(*parts.ctx, {{name + " : (ZList) -> ZList", name + "(xs) = Nil"}});
  TestCriterion& tc = inst.criterion;
  tc.primary = *parts.ctx->fns.find(name);
  tc.param_types = {parts.lc.list};
  tc.ret = parts.lc.list;
  tc.kind = kind;
  tc.int_codec = parts.ic;
  tc.list_codec = parts.lc;
  for (const auto& xs : int_lists(lo, hi, max_len)) {
    tc.inputs.push_back({make_int_list(pool, parts.ic, parts.lc, xs)});
    tc.expected.push_back(make_int_list(pool, parts.ic, parts.lc, fn(xs)));
  }
  fill_oracle(tc);
  return inst;
}

ProblemInstance build_sum(ValuePool& pool) {
  return list_to_int_problem(pool, "sum", "plus",
                             [](const std::vector<long long>& xs) {
                               long long s = 0;
                               for (long long v : xs) s += v;
                               return s;
                             },
                             -2, 2, 3);
}

ProblemInstance build_min(ValuePool& pool) {
  auto parts = int_problem_context(false);
  install_native(*parts.ctx, "leq");
  ProblemInstance inst;
  inst.name = "min";
  inst.ctx = parts.ctx;
  inst.initial = parse_program(*parts.ctx, {{"min : (Z, Z) -> Z", "min(n, m) = Zero"}});
  TestCriterion& tc = inst.criterion;
  tc.primary = *parts.ctx->fns.find("min");
  tc.param_types = {parts.ic.z, parts.ic.z};
  tc.ret = parts.ic.z;
  tc.kind = AssessKind::Exact;
  tc.int_codec = parts.ic;
  for (long long a : int_range(-8, 8))
    for (long long b : int_range(-8, 8)) {
      tc.inputs.push_back({parts.ic.encode(pool, a), parts.ic.encode(pool, b)});
      tc.expected.push_back(parts.ic.encode(pool, std::min(a, b)));
    }
  fill_oracle(tc);
  return inst;
}

ProblemInstance build_minl(ValuePool& pool) {
  // Smallest element of a list, 0 when empty.
  return list_to_int_problem(pool, "minl", "leq",
                             [](const std::vector<long long>& xs) {
                               long long m = 0;
                               bool first = true;
                               for (long long v : xs) {
                                 m = first ? v : std::min(m, v);
                                 first = false;
                               }
                               return m;
                             },
                             -2, 2, 3, AssessKind::Exact);
}

ProblemInstance build_insert(ValuePool& pool) {
  // Insert before the first entry that is greater than or equal.
  auto parts = int_problem_context(true);
  install_native(*parts.ctx, "leq");
  ProblemInstance inst;
  inst.name = "insert";
  inst.ctx = parts.ctx;
  inst.initial =
      parse_program(*parts.ctx, {{"insert : (Z, ZList) -> ZList", "insert(x, xs) = Nil"}});
  TestCriterion& tc = inst.criterion;
  tc.primary = *parts.ctx->fns.find("insert");
  tc.param_types = {parts.ic.z, parts.lc.list};
  tc.ret = parts.lc.list;
  tc.kind = AssessKind::ListExact;
  tc.int_codec = parts.ic;
  tc.list_codec = parts.lc;
  for (long long x : int_range(-2, 2))
    for (const auto& xs : int_lists(-2, 2, 2)) {
      std::vector<long long> out = xs;
      size_t pos = 0;
      while (pos < out.size() && out[pos] < x) ++pos;
      out.insert(out.begin() + pos, x);
      tc.inputs.push_back({parts.ic.encode(pool, x), make_int_list(pool, parts.ic, parts.lc, xs)});
      tc.expected.push_back(make_int_list(pool, parts.ic, parts.lc, out));
    }
  fill_oracle(tc);
  return inst;
}

ProblemInstance build_helloworld(ValuePool& pool) {
  auto parts = int_problem_context(true);
  ProblemInstance inst;
  inst.name = "helloworld";
  inst.ctx = parts.ctx;
  inst.initial =
      parse_program(*parts.ctx, {{"helloworld : () -> ZList", "helloworld() = Nil"}});
  TestCriterion& tc = inst.criterion;
  tc.primary = *parts.ctx->fns.find("helloworld");
  tc.param_types = {};
  tc.ret = parts.lc.list;
  tc.kind = AssessKind::ListInt;
  tc.int_codec = parts.ic;
  tc.list_codec = parts.lc;
  std::vector<long long> codes;
  for (char c : std::string("Hello World")) codes.push_back(static_cast<long long>(c));
  tc.inputs.push_back({});
  tc.expected.push_back(make_int_list(pool, parts.ic, parts.lc, codes));
  fill_oracle(tc);
  return inst;
}

ProblemInstance build_sort(ValuePool& pool) {
  return list_to_list_problem(pool, "sort", "leq",
                              [](const std::vector<long long>& xs) {
                                auto out = xs;
                                std::sort(out.begin(), out.end());
                                return out;
                              },
                              -2, 2, 3, AssessKind::ListExact);
}

ProblemInstance build_reverse(ValuePool& pool) {
  return list_to_list_problem(pool, "reverse", "",
                              [](const std::vector<long long>& xs) {
                                auto out = xs;
                                std::reverse(out.begin(), out.end());
                                return out;
                              },
                              -2, 2, 3, AssessKind::ListExact);
}

ProblemInstance build_parity(ValuePool& pool) {
  auto ctx = std::make_shared<TypingContext>();
  ListCodec lc = ListCodec::install(*ctx, "BList", ctx->bool_type());
  install_native(*ctx, "not");
  ProblemInstance inst;
  inst.name = "parity";
  inst.ctx = ctx;
  inst.initial = parse_program(*ctx, {{"parity : (BList) -> Bool", "parity(xs) = True"}});
  TestCriterion& tc = inst.criterion;
  tc.primary = *ctx->fns.find("parity");
  tc.param_types = {lc.list};
  tc.ret = ctx->bool_type();
  tc.kind = AssessKind::Exact;
  // All Bool lists of length <= 4 (31 cases), shortest first.
  std::vector<std::vector<bool>> lists{{}};
  size_t begin = 0;
  for (int len = 1; len <= 4; ++len) {
    size_t end = lists.size();
    for (size_t i = begin; i < end; ++i)
      for (bool b : {false, true}) {
        auto xs = lists[i];
        xs.insert(xs.begin(), b);
        lists.push_back(std::move(xs));
      }
    begin = end;
  }
  for (const auto& xs : lists) {
    std::vector<const Value*> items;
    int trues = 0;
    for (bool b : xs) {
      items.push_back(pool.make(b ? ctx->true_ctor() : ctx->false_ctor()));
      trues += b ? 1 : 0;
    }
    tc.inputs.push_back({lc.encode(pool, items)});
    tc.expected.push_back(pool.make(trues % 2 == 0 ? ctx->true_ctor() : ctx->false_ctor()));
  }
  fill_oracle(tc);
  return inst;
}

}  // namespace

const std::vector<ProblemDef>& problem_registry() {
  static const std::vector<ProblemDef> defs = {
      {"sum", "sum of an integer list ([Z] -> Z, plus available)", build_sum},
      {"min", "minimum of two integers ((Z, Z) -> Z, leq available)", build_min},
      {"minl", "smallest element of a list, 0 if empty ([Z] -> Z, leq available)", build_minl},
      {"insert", "insert before the first greater-or-equal entry ((Z, [Z]) -> [Z], leq available)",
       build_insert},
      {"helloworld", "the ASCII codes of \"Hello World\" (() -> [Z])", build_helloworld},
      {"sort", "sort an integer list ([Z] -> [Z], leq available)", build_sort},
      {"reverse", "reverse an integer list ([Z] -> [Z])", build_reverse},
      {"parity", "True iff the list has an even number of True ([Bool] -> Bool, not available)",
       build_parity},
  };
  return defs;
}

const ProblemDef* find_problem(std::string_view name) {
  for (const auto& d : problem_registry())
    if (d.name == name) return &d;
  return nullptr;
}

// --- problem files ---------------------------------------------------------------

namespace {
std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}
}  // namespace

ProblemInstance parse_problem_text(const std::string& text, ValuePool& pool,
                                   const std::string& name_hint) {
  auto ctx = std::make_shared<TypingContext>();
  IntCodec::install(*ctx);  // the integer encoding is always available to files

  ProblemInstance inst;
  inst.name = name_hint;
  inst.ctx = ctx;
  TestCriterion& tc = inst.criterion;

  std::optional<ParsedSignature> primary;
  std::string init_text;
  std::string assess_text = "exact";

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream ls(s);
    std::string word;
    ls >> word;
    std::string rest = strip(s.substr(word.size()));
    try {
      if (word == "problem") {
        inst.name = rest;
      } else if (word == "type") {
        parse_type_defs(*ctx, s);
      } else if (word == "builtin") {
        ParsedSignature sig = parse_signature(*ctx, rest);
        if (!install_native(*ctx, sig.name))
          throw ParseError(lineno, "unknown builtin '" + sig.name + "'");
        const BuiltinFn* b = ctx->find_builtin(*ctx->fns.find(sig.name));
        if (b->params != sig.params || b->ret != sig.ret)
          throw ParseError(lineno, "builtin '" + sig.name + "' has a different signature");
      } else if (word == "primary") {
        primary = parse_signature(*ctx, rest);
      } else if (word == "assess") {
        assess_text = rest;
      } else if (word == "init") {
        init_text = rest;
      } else if (word == "test") {
        if (!primary) throw ParseError(lineno, "'test' before 'primary'");
        // test (v1, v2, ...) -> expected
        size_t arrow = s.rfind("->");
        if (arrow == std::string::npos) throw ParseError(lineno, "missing '->'");
        std::string lhs = strip(s.substr(4, arrow - 4));
        std::string rhs = strip(s.substr(arrow + 2));
        if (lhs.size() < 2 || lhs.front() != '(' || lhs.back() != ')')
          throw ParseError(lineno, "test inputs must be parenthesized");
        std::string args = lhs.substr(1, lhs.size() - 2);
        std::vector<const Value*> tuple;
        size_t pos = 0;
        int depth = 0;
        std::string cur;
        auto flush = [&]() {
          std::string a = strip(cur);
          if (a.empty()) return;
          size_t i = tuple.size();
          if (i >= primary->params.size()) throw ParseError(lineno, "too many test inputs");
          tuple.push_back(parse_value(*ctx, pool, a, primary->params[i]));
          cur.clear();
        };
        for (; pos < args.size(); ++pos) {
          char c = args[pos];
          if (c == '(' || c == '[') ++depth;
          if (c == ')' || c == ']') --depth;
          if (c == ',' && depth == 0) {
            flush();
            continue;
          }
          cur += c;
        }
        flush();
        if (tuple.size() != primary->params.size())
          throw ParseError(lineno, "wrong number of test inputs");
        tc.inputs.push_back(std::move(tuple));
        tc.expected.push_back(parse_value(*ctx, pool, rhs, primary->ret));
      } else if (word == "config") {
        std::string key;
        ls.clear();
        ls.str(rest);
        ls >> key;
        long v = 0;
        ls >> v;
        if (key == "n_stretch") inst.config.n_stretch = static_cast<int>(v);
        else if (key == "n_mutate") inst.config.n_mutate = static_cast<int>(v);
        else if (key == "max_cycles") inst.config.max_cycles = static_cast<int>(v);
        else if (key == "mutation_budget") inst.config.mutation_budget = static_cast<int>(v);
        else if (key == "call_limit") inst.config.eval.call_limit = static_cast<int>(v);
        else if (key == "stretch_fn") inst.config.allow_stretch_fn = v != 0;
        else if (key == "suppose_anywhere") inst.config.suppose_anywhere = v != 0;
        else throw ParseError(lineno, "unknown config key '" + key + "'");
      } else {
        throw ParseError(lineno, "unknown directive '" + word + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError(lineno, std::string(e.what()));
    }
  }

  if (!primary) throw ParseError(lineno, "missing 'primary' declaration");
  if (init_text.empty()) throw ParseError(lineno, "missing 'init' program");
  tc.primary = *ctx->fns.find(primary->name);
  tc.param_types = primary->params;
  tc.ret = primary->ret;

  IntCodec ic = IntCodec::lookup(*ctx);
  if (assess_text == "exact") tc.kind = AssessKind::Exact;
  else if (assess_text == "int") tc.kind = AssessKind::Int;
  else if (assess_text == "list-exact" || assess_text == "list-int") {
    tc.kind = assess_text == "list-int" ? AssessKind::ListInt : AssessKind::ListExact;
    const TypeDef& td = ctx->type_def(primary->ret);
    ListCodec lc;
    lc.list = primary->ret;
    for (CtorId c : td.ctors) {
      const CtorDef& cd = ctx->ctor_def(c);
      if (cd.args.size() == 2 && cd.args[1] == primary->ret) {
        lc.cons = c;
        lc.elem = cd.args[0];
      }
      if (cd.args.empty()) lc.nil = c;
    }
    if (lc.cons < 0 || lc.nil < 0)
      throw ParseError(lineno, "list assessment needs a Cons/Nil-shaped return type");
    tc.list_codec = lc;
  } else {
    throw ParseError(lineno, "unknown assessment '" + assess_text + "'");
  }
  tc.int_codec = ic;

  Program p;
  parse_function_into(p, *ctx, init_text, primary->params, primary->ret);
  inst.initial = std::move(p);
  fill_oracle(tc);
  return inst;
}

ProblemInstance load_problem_file(const std::string& path, ValuePool& pool) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  size_t dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_problem_text(ss.str(), pool, name);
}

std::vector<std::string> validate_problem(const ProblemInstance& inst, ValuePool& pool) {
  std::vector<std::string> issues;
  const TestCriterion& tc = inst.criterion;
  if (auto err = typecheck(inst.initial, *inst.ctx))
    issues.push_back("initial program: " + err->rule + " at tag " + std::to_string(err->tag) +
                     ": " + err->detail);
  if (auto bad = audit_tags(inst.initial))
    issues.push_back("initial program: duplicate or out-of-range tag " + std::to_string(*bad));
  if (!inst.initial.find_fn(tc.primary))
    issues.push_back("initial program does not define the primary function");
  if (tc.inputs.empty()) issues.push_back("no test inputs");
  if (tc.inputs.size() != tc.expected.size()) issues.push_back("inputs/expected size mismatch");
  for (const auto& tuple : tc.inputs)
    if (tuple.size() != tc.param_types.size()) {
      issues.push_back("an input tuple does not match the primary arity");
      break;
    }
  // Builtins must be total on test data: exercise each builtin on the values
  // reachable from inputs of matching type. Here we simply check decodability
  // of integer arguments, which is what the shipped natives require.
  if (!issues.empty()) return issues;
  // The assessment must give all ones exactly on the expected output.
  for (size_t k = 0; k < tc.inputs.size(); ++k) {
    ScoredValue s = tc.assess(static_cast<int>(k), tc.expected[k]);
    if (!s.all_perfect()) {
      issues.push_back("assessment is not all-ones on the expected output of case " +
                       std::to_string(k));
      break;
    }
  }
  (void)pool;
  return issues;
}

}  // namespace tracegp
