#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evolisp/types.hpp"
#include "evolisp/value.hpp"

namespace evolisp {

// Immutable expression trees. Var names builtins and program inputs (bound
// in the TypeEnv); LocalRef names fn parameters and let bindings introduced
// inside the tree itself.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Param {
  std::string name;
  TypePtr type;
};

struct LitNode {
  Value value;
  TypePtr type;
};
struct VarNode {
  std::string name;
};
struct LocalNode {
  std::string name;
};
struct AppNode {
  ExprPtr fn;
  std::vector<ExprPtr> args;
};
struct AbsNode {
  std::vector<Param> params;
  ExprPtr body;
};
struct LetNode {
  std::string name;
  ExprPtr def;
  ExprPtr body;
};

struct Expr {
  std::variant<LitNode, VarNode, LocalNode, AppNode, AbsNode, LetNode> node;
};

ExprPtr lit(Value v, TypePtr t);
ExprPtr var_ref(std::string name);
ExprPtr local_ref(std::string name);
ExprPtr app(ExprPtr fn, std::vector<ExprPtr> args);
ExprPtr abs(std::vector<Param> params, ExprPtr body);
ExprPtr let_expr(std::string name, ExprPtr def, ExprPtr body);

template <typename T>
const T* as(const ExprPtr& e) {
  return std::get_if<T>(&e->node);
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// An expression paired with the type the compiler assigned it.
struct TypedAst {
  ExprPtr expr;
  TypePtr type;
};

// Program size as atom count: Lit/Var/LocalRef are 1; an application is the
// sum of its parts; fn adds 1 plus one per parameter; let adds 2 (the
// binding name and the let form itself count like the fn header does).
size_t ast_size(const ExprPtr& e);
inline size_t ast_size(const TypedAst& a) { return ast_size(a.expr); }

// Independent bottom-up type derivation. Agrees with the compiler's
// incremental typing (modulo variable renaming) or throws TypeError; used
// as the oracle that compiled trees are well formed.
TypePtr check_type(const ExprPtr& e, const TypeEnv& env);
inline TypePtr check_type(const TypedAst& a, const TypeEnv& env) {
  return check_type(a.expr, env);
}

// Clojure-flavored source text:
//   (defn smallest [input1 input2] (min input1 input2))
// fn renders as (fn [a-0] ...), let as (let [a-1 <def>] <body>).
std::string render_expr(const ExprPtr& e);
std::string render_source(const TypedAst& program, const std::string& fn_name,
                          const std::vector<std::string>& arg_names);

struct SourceParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses the body expression of rendered source. Names bound by enclosing
// fn/let forms become LocalRef; everything else becomes Var. Literal types
// are inferred from their shape (integers Int, decimals Double, etc.);
// empty sequence literals are rejected as untypeable.
ExprPtr parse_expr(std::string_view text);
// Parses a full (defn name [args...] body) form, returning the body.
ExprPtr parse_defn(std::string_view text, std::string* name_out = nullptr,
                   std::vector<std::string>* args_out = nullptr);

}  // namespace evolisp
