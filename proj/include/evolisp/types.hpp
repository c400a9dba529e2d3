#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace evolisp {

// Hindley-Milner style types over a fixed alphabet:
//   ground:       Boolean, Int, Double, Char, String, Nil
//   constructors: Sequence[a], Set[a], Map[k, v]
//   functions:    (T1, ..., Tn) -> R   (n may be 0 or 1; arity is fixed)
//   variables:    lowercase identifiers, e.g. a, b, t12

struct Type;
using TypePtr = std::shared_ptr<const Type>;

enum class TypeKind { Ground, Ctor, Fn, Var };

struct Type {
  TypeKind kind;
  std::string name;             // Ground / Ctor / Var
  std::vector<TypePtr> params;  // Ctor params, or Fn argument types
  TypePtr ret;                  // Fn only
  bool has_var = false;         // cached: any Var anywhere below
};

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TypePtr ground(const std::string& name);
TypePtr ctor(const std::string& name, std::vector<TypePtr> params);
TypePtr fn_type(std::vector<TypePtr> args, TypePtr ret);
TypePtr tvar(std::string id);

// Shared singletons for the ground types.
const TypePtr& boolean_type();
const TypePtr& int_type();
const TypePtr& double_type();
const TypePtr& char_type();
const TypePtr& string_type();
const TypePtr& nil_type();
TypePtr seq_of(TypePtr elem);

bool type_equal(const TypePtr& a, const TypePtr& b);
// Equality modulo a consistent (bijective) renaming of type variables.
bool alpha_equal(const TypePtr& a, const TypePtr& b);
bool occurs_in(const std::string& var_id, const TypePtr& t);
inline bool is_function(const TypePtr& t) { return t->kind == TypeKind::Fn; }

// Collects the distinct free variable ids of t in first-occurrence order.
std::vector<std::string> free_vars(const TypePtr& t);

// A set of variable bindings kept idempotent: no bound variable ever occurs
// in any right-hand side, so one application pass fully resolves a type.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return bindings_.empty(); }
  size_t size() const { return bindings_.size(); }
  const TypePtr* lookup(const std::string& id) const;
  const std::vector<std::pair<std::string, TypePtr>>& bindings() const {
    return bindings_;
  }

  TypePtr apply(const TypePtr& t) const;

  // Adds id := t, rewriting existing right-hand sides so idempotence is
  // preserved. t must already be resolved under this substitution.
  // Fails (returns false) when the occurs check trips.
  bool bind(const std::string& id, TypePtr t);

 private:
  std::vector<std::pair<std::string, TypePtr>> bindings_;
};

inline TypePtr substitute(const Substitution& s, const TypePtr& t) {
  return s.apply(t);
}

// Robinson first-order unification with occurs check. Failure is a value.
std::optional<Substitution> unify(const TypePtr& a, const TypePtr& b);

// Combines two substitutions into one consistent with both: bindings for a
// shared variable are unified, not overwritten.
std::optional<Substitution> merge(const Substitution& s1,
                                  const Substitution& s2);

// Fresh-name supply shared across one compilation: type variables t0, t1, ...
// and local value names a-0, a-1, ...
struct FreshNames {
  uint64_t next_type_var = 0;
  uint64_t next_local = 0;
  std::string type_var() { return "t" + std::to_string(next_type_var++); }
  std::string local() { return "a-" + std::to_string(next_local++); }
};

// forall-quantified type. Invariants checked at construction: every
// quantified variable occurs in the body, and the variable list is distinct.
class Scheme {
 public:
  Scheme(std::vector<std::string> vars, TypePtr body);
  static Scheme mono(TypePtr body) { return Scheme({}, std::move(body)); }

  const std::vector<std::string>& vars() const { return vars_; }
  const TypePtr& body() const { return body_; }
  bool is_mono() const { return vars_.empty(); }

  // Replaces every quantified variable with a fresh one.
  TypePtr instantiate(FreshNames& fresh) const;

  // Quantifies every free variable of t.
  static Scheme generalize(const TypePtr& t);

 private:
  std::vector<std::string> vars_;
  TypePtr body_;
};

// Name -> Scheme environment: a shared base table (builtins, set up once)
// plus an immutable chain of local bindings layered on top. extended() is
// cheap and never touches the base; bind() mutates the base and is only for
// the setup phase, before any extension is taken.
class TypeEnv {
 public:
  TypeEnv() : base_(std::make_shared<Base>()) {}

  void bind(std::string name, Scheme scheme);
  TypeEnv extended(const std::string& name, Scheme scheme) const;

  // Innermost binding wins. find returns nullptr when absent; lookup throws.
  const Scheme* find(const std::string& name) const;
  const Scheme& lookup(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }

  // Base-table iteration (setup-phase bindings only, unspecified order).
  const std::unordered_map<std::string, Scheme>& base() const {
    return base_->table;
  }

 private:
  struct Base {
    std::unordered_map<std::string, Scheme> table;
  };
  struct LocalNode {
    std::shared_ptr<const LocalNode> parent;
    std::string name;
    Scheme scheme;
  };

  std::shared_ptr<Base> base_;
  std::shared_ptr<const LocalNode> locals_;
};

struct EnvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text form, round-trippable through parse_type:
//   Int
//   Sequence[Int]
//   (Int, Int) -> Int
//   a -> b                      (single argument; parenthesized when nested)
//   forall a b. ((a -> b), Sequence[a]) -> Sequence[b]
std::string to_string(const TypePtr& t);
std::string to_string(const Scheme& s);

struct TypeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TypePtr parse_type(std::string_view text);
// Accepts an optional "forall v1 v2." prefix.
Scheme parse_scheme(std::string_view text);

}  // namespace evolisp
