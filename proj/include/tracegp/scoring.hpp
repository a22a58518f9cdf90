#pragma once

#include <map>

#include "tracegp/eval.hpp"

namespace tracegp {

// Score-tagged mirror of a value: one score in [0, 1] per node, same shape
// as the value it assesses.
struct ScoredValue {
  double score = 0;
  std::vector<ScoredValue> children;
  bool all_perfect() const {
    if (score != 1.0) return false;
    for (const auto& c : children)
      if (!c.all_perfect()) return false;
    return true;
  }
};

// Assessment functions. Each annotates every node of `actual` with a score,
// never changing the underlying value, and yields all ones iff actual equals
// expected.

// Node score 1 iff the subtree at that position equals the expected subtree.
ScoredValue assess_exact(const Value* expected, const Value* actual);

// For the binary integer encoding: a number node scores the fraction of
// matching aligned bit positions (0 on sign/constructor mismatch); a bits
// node scores the aligned-match fraction of the remaining bit positions.
ScoredValue assess_int(const IntCodec& codec, const Value* expected, const Value* actual);

// Positional list comparison: spine nodes score 1 iff their constructor
// matches the expected constructor at the same position; element nodes are
// scored by the element assessor against the expected element there; surplus
// positions score 0.
using ElemAssessor = std::function<ScoredValue(const Value* expected, const Value* actual)>;
ScoredValue assess_list(const ListCodec& codec, const ElemAssessor& elem, const Value* expected,
                        const Value* actual);

// --- test criteria -----------------------------------------------------------

enum class AssessKind { Exact, Int, ListExact, ListInt };

struct TestCriterion {
  FnId primary = -1;
  std::vector<TypeId> param_types;
  TypeId ret = -1;
  std::vector<std::vector<const Value*>> inputs;   // one tuple per test case
  std::vector<const Value*> expected;              // one output per test case
  AssessKind kind = AssessKind::Exact;
  IntCodec int_codec;    // for Int / ListInt
  ListCodec list_codec;  // for List*
  // Answers for recursive calls while scoring; usually inputs -> expected.
  std::map<std::vector<const Value*>, const Value*> oracle;
  bool use_oracle = true;

  ScoredValue assess(int k, const Value* actual) const;
};

// --- score tables -------------------------------------------------------------

class ScoreTable {
 public:
  struct Cell {
    double num = 0, den = 0;
  };

  void add(Tag t, double score, double weight) {
    Cell& c = cells_[t];
    c.num += score * weight;
    c.den += weight;
  }
  // Tags never observed report 1: dead code is never selected for mutation.
  double score(Tag t) const {
    auto it = cells_.find(t);
    if (it == cells_.end() || it->second.den == 0) return 1.0;
    return it->second.num / it->second.den;
  }
  bool evaluated(Tag t) const {
    auto it = cells_.find(t);
    return it != cells_.end() && it->second.den > 0;
  }
  // Evaluated tags in ascending order (deterministic iteration).
  std::vector<Tag> evaluated_tags() const;

 private:
  std::unordered_map<Tag, Cell> cells_;
};

struct ScoreResult {
  ScoreTable table;
  double global = 0;     // mean of all assessed node scores over all inputs
  bool perfect = false;  // every node of every assessed output scored 1
  int failed_inputs = 0;
};

struct ScoreOptions {
  EvalConfig eval;
  bool use_oracle = true;
  bool collect_io = false;
  std::ostream* trace_dump = nullptr;
};

// The local-scoring pass: evaluates the primary function on every input with
// empty-trace arguments, assesses each outcome, and attributes node scores to
// the tags in each node's trace (inverted for negated entries), each weighted
// by the reciprocal of the call-stack depth the entry was created at. Failed
// evaluations contribute score 0 to their punished tags and one zero-scored
// virtual node to the global mean.
ScoreResult score_program(const Program& p, const TypingContext& ctx, const TestCriterion& tc,
                          ValuePool& pool, const ScoreOptions& opts = {},
                          IoCollector* io_out = nullptr, long* assessment_counter = nullptr);

// Test-support check: for every suppose with a literal True condition,
// asserts S(condition) == S(suppose) within tol. Returns the violating tag
// pair if any.
std::optional<std::pair<Tag, Tag>> check_suppose_lemma(const Program& p, const TypingContext& ctx,
                                                       const TestCriterion& tc, ValuePool& pool,
                                                       double tol = 1e-12);

}  // namespace tracegp
