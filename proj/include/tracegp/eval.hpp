#pragma once

#include <iosfwd>
#include <map>
#include <set>

#include "tracegp/expr.hpp"
#include "tracegp/value.hpp"

namespace tracegp {

// --- traces ------------------------------------------------------------------

// A trace is an ordered list of signed tags. Each entry also remembers the
// call-stack depth at which it was created (scoring weighs by 1/depth).
// Traces are immutable ropes allocated in an arena: prepend, concatenation
// and sign flip are O(1), and the whole structure is freed when the arena
// resets after a scoring pass.
struct TraceNode {
  enum Kind : uint8_t { Leaf, Concat, Neg } kind;
  Tag tag;            // Leaf
  int32_t depth;      // Leaf
  const TraceNode* a; // Concat left / Neg inner
  const TraceNode* b; // Concat right
};

using TraceRef = const TraceNode*;  // nullptr = empty trace

TraceRef trace_leaf(Arena& arena, Tag t, int depth);
TraceRef trace_concat(Arena& arena, TraceRef x, TraceRef y);
TraceRef trace_prepend(Arena& arena, Tag t, int depth, TraceRef rest);
TraceRef trace_negate(Arena& arena, TraceRef t);

// In-order visit: fn(tag, negated, depth).
void trace_for_each(TraceRef t, const std::function<void(Tag, bool, int)>& fn);
std::vector<std::tuple<Tag, bool, int>> trace_entries(TraceRef t);

// --- traced values -------------------------------------------------------------

struct TracedValue {
  CtorId ctor;
  const Value* untagged;
  TraceRef trace;
  TracedValue* const* children;
  int32_t n_children;
};

// tr(v): the traced value with every trace empty.
TracedValue* traced_from_value(Arena& arena, const Value* v);

// --- evaluation ------------------------------------------------------------------

struct EvalConfig {
  int call_limit = 10000;
  bool recursion_guard = true;
};

enum class FailKind { CallLimit, RecursionViolation, MissingCaseArm };

const char* fail_kind_name(FailKind k);

struct Failure {
  FailKind kind;
  // Punished (tag, depth) occurrences: for CallLimit every evaluation event
  // of the execution, otherwise the expression stack at the failure point.
  std::vector<std::pair<Tag, int>> punished;
};

struct EvalOutcome {
  TracedValue* value = nullptr;  // set iff success
  std::optional<Failure> failure;
  bool ok() const { return value != nullptr; }
};

// Answers recursive calls of the primary function from training data while
// scoring: if the (untagged) argument tuple is present, the call evaluates to
// the recorded output instead of running the body. The structural-recursion
// guard is checked first either way.
struct RecursionOracle {
  FnId primary = -1;
  const std::map<std::vector<const Value*>, const Value*>* table = nullptr;
};

// Collects, per expression tag, the set of (variable bindings, result) pairs
// observed during evaluation. Bindings are the current frame's variables in
// binding order. Entry order is deterministic (first-seen).
class IoCollector {
 public:
  struct Entry {
    std::vector<const Value*> sigma;
    const Value* result;
  };
  void add(Tag t, std::vector<const Value*> sigma, const Value* result);
  const std::vector<Entry>& entries(Tag t) const;
  bool has(Tag t) const { return tables_.count(t) > 0; }

 private:
  std::unordered_map<Tag, std::vector<Entry>> tables_;
  std::unordered_map<Tag, std::set<std::vector<const Value*>>> seen_;
  static const std::vector<Entry> empty_;
};

class Evaluator {
 public:
  Evaluator(const TypingContext& ctx, const Program& prog, ValuePool& pool, Arena& arena,
            EvalConfig cfg = {})
      : ctx_(ctx), prog_(prog), pool_(pool), arena_(arena), cfg_(cfg) {}

  void set_oracle(const RecursionOracle* oracle) { oracle_ = oracle; }
  void set_io_collector(IoCollector* io) { io_ = io; }
  void set_trace_dump(std::ostream* os) { dump_ = os; }

  // Evaluates fn applied to the given untagged inputs (wrapped with empty
  // traces) in a fresh top-level frame at call-stack depth 1.
  EvalOutcome eval_call(FnId fn, std::span<const Value* const> args);

 private:
  struct Frame {
    FnId fn;
    int depth;
    std::vector<std::pair<VarId, TracedValue*>> bindings;
    std::vector<const Value*> args;  // untagged, for the recursion guard
  };
  struct Abort {
    FailKind kind;
  };

  TracedValue* eval(const ExprPtr& e);
  TracedValue* eval_fn_call(const Expr& e);
  TracedValue* lookup(VarId v) const;
  TracedValue* with_trace(const TracedValue* v, TraceRef trace);
  bool guard_allows(FnId f, const std::vector<const Value*>& args) const;
  void dump_rule(const char* rule, Tag t, CtorId head);

  const TypingContext& ctx_;
  const Program& prog_;
  ValuePool& pool_;
  Arena& arena_;
  EvalConfig cfg_;
  const RecursionOracle* oracle_ = nullptr;
  IoCollector* io_ = nullptr;
  std::ostream* dump_ = nullptr;

  std::vector<Frame> stack_;
  std::vector<std::pair<Tag, int>> expr_stack_;
  std::vector<std::pair<Tag, int>> events_;
  int calls_ = 0;
};

// Structural-recursion guard, exposed for direct testing: a call f(args) is
// allowed iff f is absent from the stack or some argument index is strictly
// smaller than that argument in every stack frame of f.
bool guard_call(const std::vector<const Value*>& args,
                const std::vector<std::vector<const Value*>>& frames_of_f);

}  // namespace tracegp
