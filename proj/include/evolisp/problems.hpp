#pragma once

#include <functional>
#include <string>
#include <vector>

#include "evolisp/builtins.hpp"
#include "evolisp/compiler.hpp"
#include "evolisp/eval.hpp"
#include "evolisp/genome.hpp"
#include "evolisp/rng.hpp"

namespace evolisp {

struct Case {
  std::vector<Value> inputs;
  Value expected;
};

struct CaseSet {
  std::vector<Case> train;
  std::vector<Case> test;
};

// A benchmark task: signature, search-space ingredients, data generation,
// a reference solution, and the per-case error metric.
struct ProblemSpec {
  std::string name;
  Signature signature;
  std::vector<Builtin> builtins;  // library filtered to the problem's types
  TypeEnv env;                    // builtin schemes (arguments added later)
  BuiltinTable table;             // runtime bindings for the same
  GeneticSource source;
  std::vector<std::vector<Value>> edge_inputs;
  std::function<std::vector<Value>(Rng&)> sample_inputs;
  std::function<Value(const std::vector<Value>&)> reference;
  std::function<double(const Value& expected, const Value& actual)> error_fn;
};

const std::vector<std::string>& problem_names();
bool has_problem(const std::string& name);
const ProblemSpec& problem(const std::string& name);  // throws EnvError

// Training cases are the edge cases followed by random samples up to
// n_train; test cases are n_test random samples. Deterministic in seed.
CaseSet generate_cases(const ProblemSpec& p, size_t n_train, size_t n_test,
                       uint64_t seed);

// Error of one evaluation against the expected value. Runtime errors score
// the full penalty; metric results are clamped to the penalty and NaN maps
// to it.
double case_error(const ProblemSpec& p, const Value& expected,
                  const EvalResult& result, double penalty);

// Generic edit distance used by the string-output metrics.
double levenshtein(const std::string& a, const std::string& b);
double levenshtein_values(const std::vector<Value>& a,
                          const std::vector<Value>& b);

}  // namespace evolisp
