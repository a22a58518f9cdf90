#pragma once

#include "tracegp/evolve.hpp"
#include "tracegp/parse.hpp"

namespace tracegp {

// A fully materialized problem: context, builtins, initial program, test
// criterion. Values live in the pool handed to build(), so each run (or
// thread) materializes its own instance.
struct ProblemInstance {
  std::string name;
  std::shared_ptr<TypingContext> ctx;
  Program initial;
  TestCriterion criterion;
  CycleConfig config;  // per-problem defaults (seed-independent)
};

struct ProblemDef {
  std::string name;
  std::string summary;
  std::function<ProblemInstance(ValuePool&)> build;
};

// The shipped problem library.
const std::vector<ProblemDef>& problem_registry();
const ProblemDef* find_problem(std::string_view name);

// Loads a problem from a definition file (see problems/*.prob for the
// format). Builtins are referenced by name from the native registry.
ProblemInstance load_problem_file(const std::string& path, ValuePool& pool);
ProblemInstance parse_problem_text(const std::string& text, ValuePool& pool,
                                   const std::string& name_hint);

// Checks a problem instance: initial program typechecks and defines the
// primary function, inputs/expected match the signature, builtins are total
// on all test inputs. Returns a list of human-readable issues (empty = ok).
std::vector<std::string> validate_problem(const ProblemInstance& inst, ValuePool& pool);

}  // namespace tracegp
