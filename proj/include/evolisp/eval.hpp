#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "evolisp/ast.hpp"
#include "evolisp/value.hpp"

namespace evolisp {

// Runtime bindings for Var nodes: builtin display name -> function value.
using BuiltinTable = std::unordered_map<std::string, Value>;

using EvalResult = std::variant<Value, RuntimeError>;

inline bool is_error(const EvalResult& r) { return r.index() == 1; }
inline const Value& result_value(const EvalResult& r) {
  return std::get<Value>(r);
}
inline const RuntimeError& result_error(const EvalResult& r) {
  return std::get<RuntimeError>(r);
}

// Evaluates a program body with the given argument bindings. Errors are
// returned, never thrown: any RuntimeSignal raised by builtins, unbound
// names, or budget exhaustion is caught here. Closures created during
// evaluation reference `builtins`, which must outlive any use of them.
EvalResult evaluate(const ExprPtr& program,
                    const std::vector<std::pair<std::string, Value>>& args,
                    const BuiltinTable& builtins,
                    int64_t step_budget = kDefaultStepBudget);

}  // namespace evolisp
