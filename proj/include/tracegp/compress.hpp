#pragma once

#include "tracegp/lvalue.hpp"
#include "tracegp/scoring.hpp"

namespace tracegp {

struct CompressStats {
  int linear_replacements = 0;
  int supposes_dropped = 0;
  int ifs_folded = 0;
  int fns_removed = 0;
};

// Equivalence-preserving reduction driven by per-expression input-output
// tables collected from a scoring pass. Per body, recursively:
//   constructors and supposes recurse into children (a suppose whose
//   condition ends up variable-free is dropped); any other node is first
//   tried against the linear solver (replaced by the smallest conforming
//   linear expression when that does not grow the node count); failing that,
//   ifs recurse and fold literal conditions and calls recurse into arguments.
// Afterwards, functions unreachable from `primary` are removed.
//
// Expressions with an empty table (dead code) are never replaced. Outputs on
// every input that evaluated successfully are preserved exactly; node count
// never increases; the transformation is idempotent.
Program compress(const Program& p, const TypingContext& ctx, const IoCollector& io, FnId primary,
                 int enum_depth = 6, CompressStats* stats = nullptr);

}  // namespace tracegp
