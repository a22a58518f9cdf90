#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tracegp {

// Dense integer ids for interned names. Each kind has its own id space.
using TypeId = int32_t;
using CtorId = int32_t;
using FnId = int32_t;
using VarId = int32_t;

// Expression tags are positive and unique per program lineage; 0 is "no tag".
using Tag = int32_t;
constexpr Tag kNoTag = 0;

class NameInterner {
 public:
  int32_t intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    int32_t id = static_cast<int32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }
  std::optional<int32_t> find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& name(int32_t id) const { return names_.at(id); }
  bool contains(std::string_view name) const { return ids_.count(std::string(name)) > 0; }
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int32_t> ids_;
};

// Deterministic RNG wrapper. All randomness in the engine flows through one
// of these so that a seed fully determines a run.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  // Uniform in [0, n). n must be > 0.
  int pick(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

  size_t pick_index(size_t n) { return static_cast<size_t>(next() % n); }

  double unit() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool chance(double p) { return unit() < p; }

  // Samples an index with probability weights[i] / sum(weights).
  // Returns -1 if all weights are zero or the list is empty.
  int weighted(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    if (total <= 0) return -1;
    double r = unit() * total;
    double acc = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (r < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 eng_;
};

// Bump allocator for evaluation-scoped objects (traced values, trace ropes).
// Everything allocated here is trivially destructible and freed in one shot.
class Arena {
 public:
  explicit Arena(size_t block_size = 1 << 16) : block_size_(block_size) {}

  void* alloc(size_t bytes, size_t align) {
    size_t off = (used_ + align - 1) & ~(align - 1);
    if (blocks_.empty() || off + bytes > cap_) {
      size_t want = std::max(block_size_, bytes + align);
      blocks_.push_back(std::make_unique<char[]>(want));
      cap_ = want;
      used_ = 0;
      off = 0;
    }
    used_ = off + bytes;
    return blocks_.back().get() + off;
  }

  template <typename T, typename... Args>
  T* make(Args&&... args) {
    static_assert(std::is_trivially_destructible_v<T>);
    void* p = alloc(sizeof(T), alignof(T));
    return new (p) T{std::forward<Args>(args)...};
  }

  template <typename T>
  T* make_array(size_t n) {
    static_assert(std::is_trivially_destructible_v<T>);
    if (n == 0) return nullptr;
    void* p = alloc(sizeof(T) * n, alignof(T));
    return static_cast<T*>(p);
  }

  void reset() {
    blocks_.clear();
    used_ = cap_ = 0;
  }

 private:
  size_t block_size_;
  std::vector<std::unique_ptr<char[]>> blocks_;
  size_t used_ = 0;
  size_t cap_ = 0;
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

}  // namespace tracegp
