#include "evolisp/compiler.hpp"

#include <algorithm>

namespace evolisp {

namespace {

void dispatch(const Gene& gene, CompileState& state);

CompileState child_scope(const CompileState& parent) {
  CompileState child;
  child.locals = parent.locals;
  child.env = parent.env;
  child.fresh = parent.fresh;
  child.tree_locals = parent.tree_locals;
  child.observer = parent.observer;
  return child;
}

// Compiles one chunk in a fresh scope (empty stacks) and returns the top of
// its AST stack, if any.
std::optional<TypedAst> compile_chunk(const PushSeq& chunk,
                                      const CompileState& scope) {
  CompileState child = child_scope(scope);
  run_items(chunk, child);
  if (child.ast_stack.empty()) return std::nullopt;
  return child.ast_stack.back();
}

}  // namespace

void push_ast(CompileState& state, TypedAst ast) {
  state.ast_stack.push_back(std::move(ast));
  if (state.observer) (*state.observer)(state.ast_stack.back(), state.env);
}

std::optional<std::string> resolve_local(
    uint32_t index, const std::vector<std::string>& locals) {
  if (locals.empty()) return std::nullopt;
  return locals[index % locals.size()];
}

AppArgSearch find_app_args(std::span<const TypedAst> candidates_top_first,
                           const std::vector<TypePtr>& arg_types) {
  AppArgSearch out;
  std::vector<bool> taken(candidates_top_first.size(), false);
  for (const TypePtr& wanted : arg_types) {
    TypePtr goal = out.subst.apply(wanted);
    std::optional<size_t> picked;
    for (size_t j = 0; j < candidates_top_first.size(); ++j) {
      if (taken[j]) continue;
      auto u = unify(goal, candidates_top_first[j].type);
      if (!u) continue;
      auto merged = merge(out.subst, *u);
      if (!merged) continue;  // inconsistent with earlier picks: keep looking
      out.subst = std::move(*merged);
      picked = j;
      break;
    }
    if (picked) taken[*picked] = true;
    out.arg_indices.push_back(picked);
  }
  return out;
}

void apply_function(CompileState& state) {
  auto& stack = state.ast_stack;
  // topmost function-typed tree
  size_t fi = stack.size();
  for (size_t i = stack.size(); i-- > 0;) {
    if (is_function(stack[i].type)) {
      fi = i;
      break;
    }
  }
  if (fi == stack.size()) return;
  const TypedAst fn = stack[fi];

  // candidates are everything else, top first
  std::vector<TypedAst> candidates;
  std::vector<size_t> cand_pos;
  for (size_t i = stack.size(); i-- > 0;) {
    if (i == fi) continue;
    candidates.push_back(stack[i]);
    cand_pos.push_back(i);
  }

  AppArgSearch search = find_app_args(candidates, fn.type->params);
  if (!search.complete()) return;

  std::vector<ExprPtr> args;
  args.reserve(search.arg_indices.size());
  std::vector<size_t> consumed{fi};
  for (const auto& ix : search.arg_indices) {
    args.push_back(candidates[*ix].expr);
    consumed.push_back(cand_pos[*ix]);
  }
  std::sort(consumed.begin(), consumed.end());
  for (size_t k = consumed.size(); k-- > 0;)
    stack.erase(stack.begin() + static_cast<long>(consumed[k]));

  TypedAst result{app(fn.expr, std::move(args)),
                  search.subst.apply(fn.type->ret)};
  push_ast(state, std::move(result));
}

void compile_abs(const AbsGene& gene, CompileState& state) {
  std::vector<Param> params;
  CompileState scope = child_scope(state);
  for (const TypePtr& t : gene.arg_types) {
    std::string name = state.fresh->local();
    params.push_back({name, t});
    scope.locals.push_back(name);
    scope.env = scope.env.extended(name, Scheme::mono(t));
    scope.tree_locals.insert(std::move(name));
  }
  while (!state.chunk_stack.empty()) {
    PushSeq chunk = std::move(state.chunk_stack.back());
    state.chunk_stack.pop_back();
    std::optional<TypedAst> body = compile_chunk(chunk, scope);
    if (!body) continue;  // failed chunk is consumed; try the next
    std::vector<TypePtr> arg_types;
    for (const auto& p : params) arg_types.push_back(p.type);
    TypedAst result{abs(params, body->expr),
                    fn_type(std::move(arg_types), body->type)};
    push_ast(state, std::move(result));
    return;
  }
}

void compile_let(CompileState& state) {
  if (state.ast_stack.empty()) return;
  // The definition stays on the stack until a body compiles.
  const TypedAst def = state.ast_stack.back();
  std::string name = state.fresh->local();
  CompileState scope = child_scope(state);
  scope.locals.push_back(name);
  scope.env = scope.env.extended(name, Scheme::mono(def.type));
  scope.tree_locals.insert(name);
  while (!state.chunk_stack.empty()) {
    PushSeq chunk = std::move(state.chunk_stack.back());
    state.chunk_stack.pop_back();
    std::optional<TypedAst> body = compile_chunk(chunk, scope);
    if (!body) continue;
    state.ast_stack.pop_back();
    TypedAst result{let_expr(name, def.expr, body->expr), body->type};
    push_ast(state, std::move(result));
    return;
  }
}

namespace {

void dispatch(const Gene& gene, CompileState& state) {
  if (const auto* l = std::get_if<LitGene>(&gene)) {
    push_ast(state, TypedAst{lit(l->value, l->type), l->type});
    return;
  }
  if (const auto* v = std::get_if<VarGene>(&gene)) {
    const Scheme* s = state.env.find(v->name);
    if (!s) return;  // unbound variable gene: no-op
    TypePtr t = s->instantiate(*state.fresh);
    push_ast(state, TypedAst{var_ref(v->name), std::move(t)});
    return;
  }
  if (const auto* x = std::get_if<LocalGene>(&gene)) {
    std::optional<std::string> name = resolve_local(x->index, state.locals);
    if (!name) return;
    const Scheme* s = state.env.find(*name);
    if (!s) return;
    TypePtr t = s->instantiate(*state.fresh);
    ExprPtr ref = state.tree_locals.count(*name) ? local_ref(*name)
                                                 : var_ref(*name);
    push_ast(state, TypedAst{std::move(ref), std::move(t)});
    return;
  }
  if (std::get_if<AppGene>(&gene)) {
    apply_function(state);
    return;
  }
  if (const auto* f = std::get_if<AbsGene>(&gene)) {
    compile_abs(*f, state);
    return;
  }
  if (std::get_if<LetGene>(&gene)) {
    compile_let(state);
    return;
  }
  // OPEN/CLOSE never survive chunk nesting
}

}  // namespace

void run_items(const PushSeq& seq, CompileState& state) {
  for (const PushItem& item : seq) {
    if (item.is_chunk())
      state.chunk_stack.push_back(item.chunk());
    else
      dispatch(item.gene(), state);
  }
}

std::optional<TypedAst> select_output(const std::vector<TypedAst>& ast_stack,
                                      const TypePtr& wanted) {
  for (size_t i = ast_stack.size(); i-- > 0;) {
    auto u = unify(ast_stack[i].type, wanted);
    if (u) return TypedAst{ast_stack[i].expr, u->apply(ast_stack[i].type)};
  }
  return std::nullopt;
}

TypeEnv env_with_args(const TypeEnv& base, const Signature& sig) {
  TypeEnv env = base;
  for (size_t i = 0; i < sig.arg_names.size(); ++i)
    env = env.extended(sig.arg_names[i], Scheme::mono(sig.arg_types[i]));
  return env;
}

std::optional<TypedAst> compile(const PushSeq& seq, const Signature& sig,
                                const TypeEnv& base_env, FreshNames& fresh,
                                const PushObserver* observer) {
  CompileState state;
  state.env = env_with_args(base_env, sig);
  state.locals = sig.arg_names;
  state.fresh = &fresh;
  state.observer = observer;
  run_items(seq, state);
  return select_output(state.ast_stack, sig.return_type);
}

std::optional<TypedAst> compile_genome(const Genome& genome,
                                       const Signature& sig,
                                       const TypeEnv& base_env,
                                       FreshNames& fresh,
                                       const PushObserver* observer) {
  return compile(nest_chunks(genome), sig, base_env, fresh, observer);
}

}  // namespace evolisp
