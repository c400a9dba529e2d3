#include "evolisp/eval.hpp"

#include <memory>

namespace evolisp {

namespace {

struct Scope {
  std::shared_ptr<const Scope> parent;
  std::string name;
  Value value;
};
using ScopePtr = std::shared_ptr<const Scope>;

ScopePtr extend(ScopePtr parent, std::string name, Value v) {
  return std::make_shared<const Scope>(
      Scope{std::move(parent), std::move(name), std::move(v)});
}

const Value* scope_find(const Scope* s, const std::string& name) {
  for (; s; s = s->parent.get())
    if (s->name == name) return &s->value;
  return nullptr;
}

Value eval_expr(const ExprPtr& e, const ScopePtr& scope,
                const BuiltinTable& builtins, Budget& budget) {
  budget.charge();
  if (const auto* l = as<LitNode>(e)) return l->value;
  if (const auto* v = as<VarNode>(e)) {
    if (const Value* bound = scope_find(scope.get(), v->name)) return *bound;
    auto it = builtins.find(v->name);
    if (it != builtins.end()) return it->second;
    signal(RtErrorKind::Other, "unbound variable at runtime: " + v->name);
  }
  if (const auto* x = as<LocalNode>(e)) {
    if (const Value* bound = scope_find(scope.get(), x->name)) return *bound;
    signal(RtErrorKind::Other, "unbound local at runtime: " + x->name);
  }
  if (const auto* a = as<AppNode>(e)) {
    Value f = eval_expr(a->fn, scope, builtins, budget);
    if (f.kind() != ValueKind::Func)
      signal(RtErrorKind::Other, "applied a non-function value");
    std::vector<Value> args;
    args.reserve(a->args.size());
    for (const auto& arg : a->args)
      args.push_back(eval_expr(arg, scope, builtins, budget));
    const FuncObj& fo = *f.as_func();
    if (fo.arity != args.size())
      signal(RtErrorKind::Other, fo.name + " arity mismatch");
    return fo.call(args, budget);
  }
  if (const auto* f = as<AbsNode>(e)) {
    auto obj = std::make_shared<FuncObj>();
    obj->name = "fn";
    obj->arity = f->params.size();
    // The closure keeps the defining scope and body alive; the builtin
    // table is borrowed from the enclosing evaluation.
    std::vector<std::string> names;
    for (const auto& p : f->params) names.push_back(p.name);
    ExprPtr body = f->body;
    ScopePtr captured = scope;
    const BuiltinTable* table = &builtins;
    obj->call = [names, body, captured, table](std::span<const Value> args,
                                               Budget& b) -> Value {
      ScopePtr inner = captured;
      for (size_t i = 0; i < names.size(); ++i)
        inner = extend(inner, names[i], args[i]);
      return eval_expr(body, inner, *table, b);
    };
    return Value::function(std::move(obj));
  }
  const auto* l = as<LetNode>(e);
  Value def = eval_expr(l->def, scope, builtins, budget);
  ScopePtr inner = extend(scope, l->name, std::move(def));
  return eval_expr(l->body, inner, builtins, budget);
}

}  // namespace

EvalResult evaluate(const ExprPtr& program,
                    const std::vector<std::pair<std::string, Value>>& args,
                    const BuiltinTable& builtins, int64_t step_budget) {
  Budget budget{step_budget};
  ScopePtr scope;
  for (const auto& [name, value] : args) scope = extend(scope, name, value);
  try {
    return eval_expr(program, scope, builtins, budget);
  } catch (const RuntimeSignal& s) {
    return s.error;
  }
}

}  // namespace evolisp
