#pragma once

#include <string>
#include <vector>

#include "evolisp/eval.hpp"
#include "evolisp/types.hpp"
#include "evolisp/value.hpp"

namespace evolisp {

// One library entry. Display names may be shared by several entries (e.g.
// "+" over Int and over Double); ids are unique. Per-problem filtering
// resolves each display name to at most one entry.
struct Builtin {
  std::string id;
  std::string name;
  Scheme scheme;
  std::string doc;  // one-line semantics for the generated reference
  Value func;
};

// The full master library.
const std::vector<Builtin>& builtin_library();

// Entries whose schemes mention only ground types and constructors from
// relevant_types (type variables are always fine). When several surviving
// entries share a display name, the one mentioning Double wins, then the
// earliest in library order.
std::vector<Builtin> builtins_for(const std::vector<TypePtr>& relevant_types);

TypeEnv env_of(const std::vector<Builtin>& builtins);
BuiltinTable table_of(const std::vector<Builtin>& builtins);

// Markdown reference table of name, type, and semantics.
std::string builtin_reference(const std::vector<Builtin>& builtins);

}  // namespace evolisp
