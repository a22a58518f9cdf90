#pragma once

#include <functional>
#include <memory>
#include <span>

#include "tracegp/base.hpp"

namespace tracegp {

struct Value;
class ValuePool;

struct CtorDef {
  CtorId id;
  TypeId owner;
  std::vector<TypeId> args;
};

struct TypeDef {
  TypeId id;
  std::vector<CtorId> ctors;  // in declaration order
};

using NativeFn = std::function<const Value*(ValuePool&, std::span<const Value* const>)>;

// A function available to evolved code but implemented natively. Builtins are
// not part of the program and are never mutated.
struct BuiltinFn {
  FnId id;
  std::vector<TypeId> params;
  TypeId ret;
  NativeFn native;
};

// Type definitions plus builtin signatures. Constructor names are unique
// across all types. Bool with True/False is always present. The context is
// fixed for the lifetime of a problem; only the name interners grow (fresh
// variable/function names minted during evolution).
class TypingContext {
 public:
  TypingContext() {
    bool_type_ = add_type("Bool");
    true_ctor_ = add_ctor("True", bool_type_, {});
    false_ctor_ = add_ctor("False", bool_type_, {});
  }

  TypeId add_type(std::string_view name) {
    TypeId id = types.intern(name);
    if (static_cast<size_t>(id) >= type_defs_.size()) type_defs_.resize(id + 1);
    type_defs_[id].id = id;
    return id;
  }

  CtorId add_ctor(std::string_view name, TypeId owner, std::vector<TypeId> args) {
    if (ctors.contains(name)) throw std::runtime_error("duplicate constructor: " + std::string(name));
    CtorId id = ctors.intern(name);
    if (static_cast<size_t>(id) >= ctor_defs_.size()) ctor_defs_.resize(id + 1);
    ctor_defs_[id] = CtorDef{id, owner, std::move(args)};
    type_defs_.at(owner).ctors.push_back(id);
    return id;
  }

  FnId add_builtin(std::string_view name, std::vector<TypeId> params, TypeId ret, NativeFn fn) {
    FnId id = fns.intern(name);
    builtins_.push_back(BuiltinFn{id, std::move(params), ret, std::move(fn)});
    return id;
  }

  const TypeDef& type_def(TypeId t) const { return type_defs_.at(t); }
  const CtorDef& ctor_def(CtorId c) const { return ctor_defs_.at(c); }
  bool has_type(TypeId t) const {
    return t >= 0 && static_cast<size_t>(t) < type_defs_.size();
  }
  const std::vector<BuiltinFn>& builtins() const { return builtins_; }
  const BuiltinFn* find_builtin(FnId f) const {
    for (const auto& b : builtins_)
      if (b.id == f) return &b;
    return nullptr;
  }

  TypeId bool_type() const { return bool_type_; }
  CtorId true_ctor() const { return true_ctor_; }
  CtorId false_ctor() const { return false_ctor_; }

  // Minimal node count of any value of type t (values are finite trees).
  int min_value_size(TypeId t) const;

  // Name spaces. Mutable so evolution can mint fresh names.
  mutable NameInterner types;
  mutable NameInterner ctors;
  mutable NameInterner fns;
  mutable NameInterner vars;

 private:
  std::vector<TypeDef> type_defs_;
  std::vector<CtorDef> ctor_defs_;
  std::vector<BuiltinFn> builtins_;
  TypeId bool_type_;
  CtorId true_ctor_, false_ctor_;
  mutable std::vector<int> min_size_cache_;
};

}  // namespace tracegp
