#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "evolisp/ast.hpp"
#include "evolisp/genome.hpp"
#include "evolisp/types.hpp"

namespace evolisp {

// A program's calling convention: argument names/types and the return type
// the compiled expression must unify with.
struct Signature {
  TypePtr return_type;
  std::vector<std::string> arg_names;
  std::vector<TypePtr> arg_types;
};

// Called after each push to the AST stack with the pushed tree and the type
// environment in scope at that point (fuzzing hook).
using PushObserver = std::function<void(const TypedAst&, const TypeEnv&)>;

// Working state of one (possibly nested) compilation scope.
struct CompileState {
  std::vector<TypedAst> ast_stack;  // back is the top
  std::vector<PushSeq> chunk_stack;
  std::vector<std::string> locals;  // binding order; Local genes index this
  TypeEnv env;
  FreshNames* fresh = nullptr;
  // Names bound by fn/let nodes of the tree under construction, as opposed
  // to program arguments, which live in the environment.
  std::unordered_set<std::string> tree_locals;
  const PushObserver* observer = nullptr;
};

// Argument search result for one application: per-parameter picks into the
// candidate list (nullopt marks a parameter nothing unified with) plus the
// accumulated substitution across picks.
struct AppArgSearch {
  std::vector<std::optional<size_t>> arg_indices;
  Substitution subst;

  bool complete() const {
    for (const auto& ix : arg_indices)
      if (!ix) return false;
    return true;
  }
};

// Top-down scan per parameter: each parameter type (with the substitution
// so far applied) takes the topmost unifiable candidate not yet taken.
AppArgSearch find_app_args(std::span<const TypedAst> candidates_top_first,
                           const std::vector<TypePtr>& arg_types);

// Resolves a Local gene index against the locals in scope (index modulo the
// local count). Empty scope yields nullopt.
std::optional<std::string> resolve_local(uint32_t index,
                                         const std::vector<std::string>& locals);

// Gene effects on the state. Each is a no-op when its preconditions fail.
void push_ast(CompileState& state, TypedAst ast);
void apply_function(CompileState& state);
void compile_abs(const AbsGene& gene, CompileState& state);
void compile_let(CompileState& state);
void run_items(const PushSeq& seq, CompileState& state);

// Topmost AST whose type unifies with wanted, with the unifier applied.
std::optional<TypedAst> select_output(const std::vector<TypedAst>& ast_stack,
                                      const TypePtr& wanted);

// Whole pipeline for a nested push sequence: run every item, then select an
// output matching the signature's return type. The environment is the base
// (builtins) extended with the signature's arguments. nullopt means the
// genome compiled to no usable program.
std::optional<TypedAst> compile(const PushSeq& seq, const Signature& sig,
                                const TypeEnv& base_env, FreshNames& fresh,
                                const PushObserver* observer = nullptr);

std::optional<TypedAst> compile_genome(const Genome& genome,
                                       const Signature& sig,
                                       const TypeEnv& base_env,
                                       FreshNames& fresh,
                                       const PushObserver* observer = nullptr);

// Compile-time environment as the compiler sees it: base plus arguments.
TypeEnv env_with_args(const TypeEnv& base, const Signature& sig);

}  // namespace evolisp
