#pragma once

#include <span>

#include "tracegp/types.hpp"

namespace tracegp {

// Immutable untagged value. Hash-consed in a ValuePool, so equality within a
// pool is pointer equality and |v| (node count) is precomputed.
struct Value {
  CtorId ctor;
  int32_t size;  // node count including this node
  uint64_t hash;
  std::vector<const Value*> children;
};

class ValuePool {
 public:
  const Value* make(CtorId ctor, std::span<const Value* const> children = {}) {
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](uint64_t x) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix(static_cast<uint64_t>(ctor));
    int32_t size = 1;
    for (const Value* c : children) {
      mix(c->hash);
      size += c->size;
    }
    auto range = buckets_.equal_range(h);
    for (auto it = range.first; it != range.second; ++it) {
      const Value* v = it->second;
      if (v->ctor == ctor && v->children.size() == children.size()) {
        bool same = true;
        for (size_t i = 0; i < children.size(); ++i)
          if (v->children[i] != children[i]) { same = false; break; }
        if (same) return v;
      }
    }
    storage_.push_back(std::make_unique<Value>(
        Value{ctor, size, h, std::vector<const Value*>(children.begin(), children.end())}));
    const Value* v = storage_.back().get();
    buckets_.emplace(h, v);
    return v;
  }

  const Value* make(CtorId ctor, std::initializer_list<const Value*> children) {
    return make(ctor, std::span<const Value* const>(children.begin(), children.size()));
  }

 private:
  std::vector<std::unique_ptr<Value>> storage_;
  std::unordered_multimap<uint64_t, const Value*> buckets_;
};

// Total order on values (by constructor id, then children). Used wherever a
// deterministic ordering of pool values is needed.
int value_compare(const Value* a, const Value* b);

std::string value_to_string(const TypingContext& ctx, const Value* v);

// Binary integer encoding. Bits chains are little-endian and always end in
// One, so every representation is canonical:
//   Bits ::= One | O(Bits) | I(Bits)       One = 1, O(b) = 2b, I(b) = 2b+1
//   Z    ::= Zero | Plus(Bits) | Minus(Bits)
struct IntCodec {
  TypeId z = -1, bits = -1;
  CtorId zero = -1, plus = -1, minus = -1, one = -1, o = -1, i = -1;

  static IntCodec install(TypingContext& ctx);
  // Looks the types up by name; all fields are -1 if absent.
  static IntCodec lookup(const TypingContext& ctx);

  bool present() const { return z >= 0; }
  const Value* encode(ValuePool& pool, long long n) const;
  std::optional<long long> decode(const Value* v) const;
  // Little-endian bit list of a Bits chain (ends in the One bit).
  std::vector<int> bits_of(const Value* bits_value) const;
};

// A list type over a fixed element type: List ::= Cons(Elem, List) | Nil.
struct ListCodec {
  TypeId list = -1;
  TypeId elem = -1;
  CtorId cons = -1, nil = -1;

  static ListCodec install(TypingContext& ctx, std::string_view name, TypeId elem);
  static ListCodec lookup(const TypingContext& ctx, std::string_view name);

  bool present() const { return list >= 0; }
  const Value* encode(ValuePool& pool, std::span<const Value* const> items) const;
  std::vector<const Value*> decode(const Value* v) const;
};

}  // namespace tracegp
