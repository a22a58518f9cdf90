#include "tracegp/value.hpp"

#include <sstream>

namespace tracegp {

int value_compare(const Value* a, const Value* b) {
  if (a == b) return 0;
  if (a->ctor != b->ctor) return a->ctor < b->ctor ? -1 : 1;
  if (a->children.size() != b->children.size())
    return a->children.size() < b->children.size() ? -1 : 1;
  for (size_t i = 0; i < a->children.size(); ++i) {
    int c = value_compare(a->children[i], b->children[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::string value_to_string(const TypingContext& ctx, const Value* v) {
  // Render integers and lists through their sugar when the shape matches.
  IntCodec ic = IntCodec::lookup(ctx);
  std::function<std::string(const Value*)> go = [&](const Value* u) -> std::string {
    if (ic.present()) {
      if (auto n = ic.decode(u)) return std::to_string(*n);
    }
    const CtorDef& cd = ctx.ctor_def(u->ctor);
    // List sugar: a chain of binary ctor named Cons ending in Nil.
    if (cd.args.size() == 2 && ctx.ctors.name(u->ctor) == "Cons") {
      std::string out = "[";
      const Value* cur = u;
      bool first = true;
      while (ctx.ctor_def(cur->ctor).args.size() == 2 && ctx.ctors.name(cur->ctor) == "Cons") {
        if (!first) out += ", ";
        out += go(cur->children[0]);
        first = false;
        cur = cur->children[1];
      }
      if (ctx.ctors.name(cur->ctor) == "Nil") return out + "]";
      // Improper chain; fall through to constructor form.
    }
    std::string out = ctx.ctors.name(u->ctor);
    if (!u->children.empty()) {
      out += "(";
      for (size_t i = 0; i < u->children.size(); ++i) {
        if (i) out += ", ";
        out += go(u->children[i]);
      }
      out += ")";
    }
    return out;
  };
  return go(v);
}

IntCodec IntCodec::install(TypingContext& ctx) {
  IntCodec c;
  c.bits = ctx.add_type("Bits");
  c.one = ctx.add_ctor("One", c.bits, {});
  c.o = ctx.add_ctor("O", c.bits, {c.bits});
  c.i = ctx.add_ctor("I", c.bits, {c.bits});
  c.z = ctx.add_type("Z");
  c.zero = ctx.add_ctor("Zero", c.z, {});
  c.plus = ctx.add_ctor("Plus", c.z, {c.bits});
  c.minus = ctx.add_ctor("Minus", c.z, {c.bits});
  return c;
}

IntCodec IntCodec::lookup(const TypingContext& ctx) {
  IntCodec c;
  auto z = ctx.types.find("Z");
  auto bits = ctx.types.find("Bits");
  if (!z || !bits) return c;
  auto get = [&](const char* n) { return ctx.ctors.find(n).value_or(-1); };
  c.z = *z;
  c.bits = *bits;
  c.zero = get("Zero");
  c.plus = get("Plus");
  c.minus = get("Minus");
  c.one = get("One");
  c.o = get("O");
  c.i = get("I");
  if (c.zero < 0 || c.plus < 0 || c.minus < 0 || c.one < 0 || c.o < 0 || c.i < 0) c.z = -1;
  return c;
}

const Value* IntCodec::encode(ValuePool& pool, long long n) const {
  if (n == 0) return pool.make(zero);
  unsigned long long mag = n > 0 ? n : -(unsigned long long)n;
  // Build the chain from the most significant bit down: One is the last
  // (most significant) bit, so start there and wrap with O / I.
  int top = 63;
  while (!((mag >> top) & 1)) --top;
  const Value* b = pool.make(one);
  for (int k = top - 1; k >= 0; --k) b = pool.make((mag >> k) & 1 ? i : o, {b});
  return pool.make(n > 0 ? plus : minus, {b});
}

std::optional<long long> IntCodec::decode(const Value* v) const {
  if (v->ctor == zero) return 0;
  if (v->ctor != plus && v->ctor != minus) return std::nullopt;
  const Value* b = v->children[0];
  long long mag = 0;
  int shift = 0;
  while (true) {
    if (shift > 62) return std::nullopt;
    if (b->ctor == one) {
      mag |= 1ll << shift;
      break;
    }
    if (b->ctor == i) mag |= 1ll << shift;
    else if (b->ctor != o) return std::nullopt;
    b = b->children[0];
    ++shift;
  }
  return v->ctor == plus ? mag : -mag;
}

std::vector<int> IntCodec::bits_of(const Value* v) const {
  std::vector<int> out;
  const Value* b = v;
  while (true) {
    if (b->ctor == one) {
      out.push_back(1);
      return out;
    }
    if (b->ctor == o) out.push_back(0);
    else if (b->ctor == i) out.push_back(1);
    else return out;  // not a Bits chain
    b = b->children[0];
  }
}

ListCodec ListCodec::install(TypingContext& ctx, std::string_view name, TypeId elem) {
  ListCodec c;
  c.elem = elem;
  c.list = ctx.add_type(name);
  c.cons = ctx.add_ctor("Cons", c.list, {elem, c.list});
  c.nil = ctx.add_ctor("Nil", c.list, {});
  return c;
}

ListCodec ListCodec::lookup(const TypingContext& ctx, std::string_view name) {
  ListCodec c;
  auto t = ctx.types.find(name);
  auto cons = ctx.ctors.find("Cons");
  auto nil = ctx.ctors.find("Nil");
  if (!t || !cons || !nil) return c;
  c.list = *t;
  c.cons = *cons;
  c.nil = *nil;
  c.elem = ctx.ctor_def(c.cons).args[0];
  return c;
}

const Value* ListCodec::encode(ValuePool& pool, std::span<const Value* const> items) const {
  const Value* v = pool.make(nil);
  for (auto it = items.rbegin(); it != items.rend(); ++it) v = pool.make(cons, {*it, v});
  return v;
}

std::vector<const Value*> ListCodec::decode(const Value* v) const {
  std::vector<const Value*> out;
  while (v->ctor == cons) {
    out.push_back(v->children[0]);
    v = v->children[1];
  }
  return out;
}

int TypingContext::min_value_size(TypeId t) const {
  if (min_size_cache_.empty()) {
    // Fixpoint over all type definitions; unreachable sizes stay "infinite".
    constexpr int kInf = 1 << 20;
    min_size_cache_.assign(type_defs_.size(), kInf);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& td : type_defs_) {
        for (CtorId c : td.ctors) {
          const CtorDef& cd = ctor_defs_[c];
          long total = 1;
          for (TypeId a : cd.args) total += min_size_cache_[a];
          if (total < min_size_cache_[td.id]) {
            min_size_cache_[td.id] = static_cast<int>(std::min<long>(total, kInf));
            changed = true;
          }
        }
      }
    }
  }
  if (static_cast<size_t>(t) >= min_size_cache_.size()) min_size_cache_.clear();  // types grew
  if (min_size_cache_.empty()) return min_value_size(t);
  return min_size_cache_.at(t);
}

}  // namespace tracegp
