#include "evolisp/types.hpp"

#include <algorithm>
#include <cctype>

namespace evolisp {

namespace {

const std::unordered_map<std::string, size_t>& ctor_arities() {
  static const std::unordered_map<std::string, size_t> table = {
      {"Sequence", 1}, {"Set", 1}, {"Map", 2}};
  return table;
}

bool is_ground_name(const std::string& name) {
  return name == "Boolean" || name == "Int" || name == "Double" ||
         name == "Char" || name == "String" || name == "Nil";
}

}  // namespace

TypePtr ground(const std::string& name) {
  if (!is_ground_name(name)) throw TypeError("unknown ground type: " + name);
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Ground;
  t->name = name;
  return t;
}

TypePtr ctor(const std::string& name, std::vector<TypePtr> params) {
  auto it = ctor_arities().find(name);
  if (it == ctor_arities().end())
    throw TypeError("unknown type constructor: " + name);
  if (it->second != params.size())
    throw TypeError(name + " expects " + std::to_string(it->second) +
                    " parameter(s), got " + std::to_string(params.size()));
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Ctor;
  t->name = name;
  for (const auto& p : params) t->has_var = t->has_var || p->has_var;
  t->params = std::move(params);
  return t;
}

TypePtr fn_type(std::vector<TypePtr> args, TypePtr ret) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Fn;
  t->has_var = ret->has_var;
  for (const auto& a : args) t->has_var = t->has_var || a->has_var;
  t->params = std::move(args);
  t->ret = std::move(ret);
  return t;
}

TypePtr tvar(std::string id) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Var;
  t->name = std::move(id);
  t->has_var = true;
  return t;
}

const TypePtr& boolean_type() {
  static const TypePtr t = ground("Boolean");
  return t;
}
const TypePtr& int_type() {
  static const TypePtr t = ground("Int");
  return t;
}
const TypePtr& double_type() {
  static const TypePtr t = ground("Double");
  return t;
}
const TypePtr& char_type() {
  static const TypePtr t = ground("Char");
  return t;
}
const TypePtr& string_type() {
  static const TypePtr t = ground("String");
  return t;
}
const TypePtr& nil_type() {
  static const TypePtr t = ground("Nil");
  return t;
}

TypePtr seq_of(TypePtr elem) { return ctor("Sequence", {std::move(elem)}); }

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->params.size() != b->params.size()) return false;
  for (size_t i = 0; i < a->params.size(); ++i)
    if (!type_equal(a->params[i], b->params[i])) return false;
  if ((a->ret == nullptr) != (b->ret == nullptr)) return false;
  return a->ret == nullptr || type_equal(a->ret, b->ret);
}

namespace {

bool alpha_walk(const TypePtr& a, const TypePtr& b,
                std::unordered_map<std::string, std::string>& ab,
                std::unordered_map<std::string, std::string>& ba) {
  if (a->kind != b->kind) return false;
  if (a->kind == TypeKind::Var) {
    auto fwd = ab.find(a->name);
    auto rev = ba.find(b->name);
    if (fwd == ab.end() && rev == ba.end()) {
      ab.emplace(a->name, b->name);
      ba.emplace(b->name, a->name);
      return true;
    }
    return fwd != ab.end() && rev != ba.end() && fwd->second == b->name &&
           rev->second == a->name;
  }
  if (a->name != b->name || a->params.size() != b->params.size()) return false;
  for (size_t i = 0; i < a->params.size(); ++i)
    if (!alpha_walk(a->params[i], b->params[i], ab, ba)) return false;
  if ((a->ret == nullptr) != (b->ret == nullptr)) return false;
  return a->ret == nullptr || alpha_walk(a->ret, b->ret, ab, ba);
}

}  // namespace

bool alpha_equal(const TypePtr& a, const TypePtr& b) {
  std::unordered_map<std::string, std::string> ab, ba;
  return alpha_walk(a, b, ab, ba);
}

bool occurs_in(const std::string& var_id, const TypePtr& t) {
  if (!t->has_var) return false;
  if (t->kind == TypeKind::Var) return t->name == var_id;
  for (const auto& p : t->params)
    if (occurs_in(var_id, p)) return true;
  return t->ret && occurs_in(var_id, t->ret);
}

namespace {

void collect_vars(const TypePtr& t, std::vector<std::string>& out) {
  if (!t->has_var) return;
  if (t->kind == TypeKind::Var) {
    if (std::find(out.begin(), out.end(), t->name) == out.end())
      out.push_back(t->name);
    return;
  }
  for (const auto& p : t->params) collect_vars(p, out);
  if (t->ret) collect_vars(t->ret, out);
}

}  // namespace

std::vector<std::string> free_vars(const TypePtr& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

const TypePtr* Substitution::lookup(const std::string& id) const {
  for (const auto& [v, t] : bindings_)
    if (v == id) return &t;
  return nullptr;
}

TypePtr Substitution::apply(const TypePtr& t) const {
  if (bindings_.empty() || !t->has_var) return t;
  switch (t->kind) {
    case TypeKind::Var: {
      const TypePtr* bound = lookup(t->name);
      return bound ? *bound : t;
    }
    case TypeKind::Ctor: {
      std::vector<TypePtr> params;
      params.reserve(t->params.size());
      bool changed = false;
      for (const auto& p : t->params) {
        params.push_back(apply(p));
        changed = changed || params.back().get() != p.get();
      }
      if (!changed) return t;
      return ctor(t->name, std::move(params));
    }
    case TypeKind::Fn: {
      std::vector<TypePtr> args;
      args.reserve(t->params.size());
      bool changed = false;
      for (const auto& a : t->params) {
        args.push_back(apply(a));
        changed = changed || args.back().get() != a.get();
      }
      TypePtr ret = apply(t->ret);
      changed = changed || ret.get() != t->ret.get();
      if (!changed) return t;
      return fn_type(std::move(args), std::move(ret));
    }
    case TypeKind::Ground:
      return t;
  }
  return t;
}

bool Substitution::bind(const std::string& id, TypePtr t) {
  if (occurs_in(id, t)) return false;
  if (t->kind == TypeKind::Var && t->name == id) return true;
  Substitution unit;
  unit.bindings_.emplace_back(id, t);
  for (auto& [v, rhs] : bindings_) rhs = unit.apply(rhs);
  bindings_.emplace_back(id, std::move(t));
  return true;
}

namespace {

bool unify_into(const TypePtr& a, const TypePtr& b, Substitution& s) {
  TypePtr ta = s.apply(a);
  TypePtr tb = s.apply(b);
  if (ta.get() == tb.get()) return true;
  if (ta->kind == TypeKind::Var) {
    if (tb->kind == TypeKind::Var && tb->name == ta->name) return true;
    return s.bind(ta->name, tb);
  }
  if (tb->kind == TypeKind::Var) return s.bind(tb->name, ta);
  if (ta->kind != tb->kind) return false;
  switch (ta->kind) {
    case TypeKind::Ground:
      return ta->name == tb->name;
    case TypeKind::Ctor: {
      if (ta->name != tb->name || ta->params.size() != tb->params.size())
        return false;
      for (size_t i = 0; i < ta->params.size(); ++i)
        if (!unify_into(ta->params[i], tb->params[i], s)) return false;
      return true;
    }
    case TypeKind::Fn: {
      if (ta->params.size() != tb->params.size()) return false;
      for (size_t i = 0; i < ta->params.size(); ++i)
        if (!unify_into(ta->params[i], tb->params[i], s)) return false;
      return unify_into(ta->ret, tb->ret, s);
    }
    case TypeKind::Var:
      break;  // handled above
  }
  return false;
}

}  // namespace

std::optional<Substitution> unify(const TypePtr& a, const TypePtr& b) {
  Substitution s;
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

std::optional<Substitution> merge(const Substitution& s1,
                                  const Substitution& s2) {
  Substitution out = s1;
  for (const auto& [id, t] : s2.bindings()) {
    if (!unify_into(tvar(id), t, out)) return std::nullopt;
  }
  return out;
}

Scheme::Scheme(std::vector<std::string> vars, TypePtr body)
    : vars_(std::move(vars)), body_(std::move(body)) {
  if (!body_) throw TypeError("scheme with null body");
  for (size_t i = 0; i < vars_.size(); ++i) {
    if (!occurs_in(vars_[i], body_))
      throw TypeError("quantified variable " + vars_[i] +
                      " does not occur in scheme body");
    for (size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j])
        throw TypeError("duplicate quantified variable " + vars_[i]);
  }
}

TypePtr Scheme::instantiate(FreshNames& fresh) const {
  if (vars_.empty()) return body_;
  Substitution s;
  for (const auto& v : vars_) s.bind(v, tvar(fresh.type_var()));
  return s.apply(body_);
}

Scheme Scheme::generalize(const TypePtr& t) { return Scheme(free_vars(t), t); }

void TypeEnv::bind(std::string name, Scheme scheme) {
  base_->table.insert_or_assign(std::move(name), std::move(scheme));
}

TypeEnv TypeEnv::extended(const std::string& name, Scheme scheme) const {
  TypeEnv out = *this;
  auto node = std::make_shared<LocalNode>(
      LocalNode{locals_, name, std::move(scheme)});
  out.locals_ = std::move(node);
  return out;
}

const Scheme* TypeEnv::find(const std::string& name) const {
  for (const LocalNode* n = locals_.get(); n; n = n->parent.get())
    if (n->name == name) return &n->scheme;
  auto it = base_->table.find(name);
  return it == base_->table.end() ? nullptr : &it->second;
}

const Scheme& TypeEnv::lookup(const std::string& name) const {
  const Scheme* s = find(name);
  if (!s) throw EnvError("unbound name: " + name);
  return *s;
}

namespace {

// nested=true adds parentheses around function types, which is how they are
// rendered in argument lists and constructor parameters.
void render(const TypePtr& t, bool nested, std::string& out) {
  switch (t->kind) {
    case TypeKind::Ground:
    case TypeKind::Var:
      out += t->name;
      return;
    case TypeKind::Ctor: {
      out += t->name;
      out += '[';
      for (size_t i = 0; i < t->params.size(); ++i) {
        if (i) out += ", ";
        render(t->params[i], true, out);
      }
      out += ']';
      return;
    }
    case TypeKind::Fn: {
      if (nested) out += '(';
      if (t->params.size() == 1) {
        render(t->params[0], true, out);
      } else {
        out += '(';
        for (size_t i = 0; i < t->params.size(); ++i) {
          if (i) out += ", ";
          render(t->params[i], true, out);
        }
        out += ')';
      }
      out += " -> ";
      render(t->ret, false, out);
      if (nested) out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const TypePtr& t) {
  std::string out;
  render(t, false, out);
  return out;
}

std::string to_string(const Scheme& s) {
  if (s.is_mono()) return to_string(s.body());
  std::string out = "forall";
  for (const auto& v : s.vars()) {
    out += ' ';
    out += v;
  }
  out += ". ";
  out += to_string(s.body());
  return out;
}

namespace {

struct TypeLexer {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  // Peeks the next token without consuming it.
  std::string_view peek() {
    size_t save = pos;
    std::string_view tok = next();
    pos = save;
    return tok;
  }

  std::string_view next() {
    skip_ws();
    if (pos >= text.size()) return {};
    char c = text[pos];
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '.')
      return text.substr(pos++, 1);
    if (c == '-' && pos + 1 < text.size() && text[pos + 1] == '>') {
      pos += 2;
      return text.substr(pos - 2, 2);
    }
    size_t start = pos;
    while (pos < text.size()) {
      char d = text[pos];
      if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' ||
          (d == '-' && pos + 1 < text.size() && text[pos + 1] != '>' &&
           pos > start)) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos == start)
      throw TypeParseError("unexpected character in type: " +
                           std::string(1, c));
    return text.substr(start, pos - start);
  }

  void expect(std::string_view tok) {
    std::string_view got = next();
    if (got != tok)
      throw TypeParseError("expected '" + std::string(tok) + "', got '" +
                           std::string(got) + "'");
  }
};

TypePtr parse_fn_chain(TypeLexer& lx);

// Parses one operand: a ground/ctor/var name, or a parenthesized group. A
// group of several comma-separated types is only legal as a function
// argument list, which the caller resolves on seeing "->".
struct Operand {
  std::vector<TypePtr> items;
  bool is_list = false;  // true when written with parens (possibly 0 or 2+)
};

Operand parse_operand(TypeLexer& lx) {
  std::string_view tok = lx.next();
  if (tok.empty()) throw TypeParseError("unexpected end of type");
  if (tok == "(") {
    Operand group;
    group.is_list = true;
    if (lx.peek() == ")") {
      lx.next();
      return group;
    }
    group.items.push_back(parse_fn_chain(lx));
    while (lx.peek() == ",") {
      lx.next();
      group.items.push_back(parse_fn_chain(lx));
    }
    lx.expect(")");
    return group;
  }
  if (std::isupper(static_cast<unsigned char>(tok[0]))) {
    std::string name(tok);
    try {
      if (lx.peek() == "[") {
        lx.next();
        std::vector<TypePtr> params;
        params.push_back(parse_fn_chain(lx));
        while (lx.peek() == ",") {
          lx.next();
          params.push_back(parse_fn_chain(lx));
        }
        lx.expect("]");
        return {{ctor(name, std::move(params))}, false};
      }
      return {{ground(name)}, false};
    } catch (const TypeError& e) {
      // construction rejects unknown names and bad arities
      throw TypeParseError(e.what());
    }
  }
  return {{tvar(std::string(tok))}, false};
}

TypePtr parse_fn_chain(TypeLexer& lx) {
  Operand lhs = parse_operand(lx);
  if (lx.peek() == "->") {
    lx.next();
    TypePtr ret = parse_fn_chain(lx);  // right-associative
    return fn_type(std::move(lhs.items), std::move(ret));
  }
  if (lhs.is_list && lhs.items.size() != 1)
    throw TypeParseError("argument list without ->");
  if (lhs.items.empty()) throw TypeParseError("empty type");
  return lhs.items[0];
}

}  // namespace

TypePtr parse_type(std::string_view text) {
  TypeLexer lx{text};
  TypePtr t = parse_fn_chain(lx);
  if (!lx.at_end())
    throw TypeParseError("trailing input after type: " + std::string(text));
  return t;
}

Scheme parse_scheme(std::string_view text) {
  TypeLexer lx{text};
  if (lx.peek() == "forall") {
    lx.next();
    std::vector<std::string> vars;
    while (lx.peek() != ".") {
      std::string_view tok = lx.next();
      if (tok.empty()) throw TypeParseError("unterminated forall prefix");
      vars.emplace_back(tok);
    }
    lx.next();  // consume '.'
    TypePtr body = parse_fn_chain(lx);
    if (!lx.at_end()) throw TypeParseError("trailing input after scheme");
    return Scheme(std::move(vars), std::move(body));
  }
  return Scheme::mono(parse_type(text));
}

}  // namespace evolisp
