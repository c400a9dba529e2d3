#include "evolisp/ast.hpp"

#include <charconv>

namespace evolisp {

ExprPtr lit(Value v, TypePtr t) {
  return std::make_shared<Expr>(Expr{LitNode{std::move(v), std::move(t)}});
}
ExprPtr var_ref(std::string name) {
  return std::make_shared<Expr>(Expr{VarNode{std::move(name)}});
}
ExprPtr local_ref(std::string name) {
  return std::make_shared<Expr>(Expr{LocalNode{std::move(name)}});
}
ExprPtr app(ExprPtr fn, std::vector<ExprPtr> args) {
  return std::make_shared<Expr>(Expr{AppNode{std::move(fn), std::move(args)}});
}
ExprPtr abs(std::vector<Param> params, ExprPtr body) {
  return std::make_shared<Expr>(
      Expr{AbsNode{std::move(params), std::move(body)}});
}
ExprPtr let_expr(std::string name, ExprPtr def, ExprPtr body) {
  return std::make_shared<Expr>(
      Expr{LetNode{std::move(name), std::move(def), std::move(body)}});
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  if (const auto* la = as<LitNode>(a)) {
    const auto* lb = as<LitNode>(b);
    return la->value == lb->value && type_equal(la->type, lb->type);
  }
  if (const auto* va = as<VarNode>(a)) return va->name == as<VarNode>(b)->name;
  if (const auto* xa = as<LocalNode>(a))
    return xa->name == as<LocalNode>(b)->name;
  if (const auto* pa = as<AppNode>(a)) {
    const auto* pb = as<AppNode>(b);
    if (pa->args.size() != pb->args.size()) return false;
    if (!expr_equal(pa->fn, pb->fn)) return false;
    for (size_t i = 0; i < pa->args.size(); ++i)
      if (!expr_equal(pa->args[i], pb->args[i])) return false;
    return true;
  }
  if (const auto* fa = as<AbsNode>(a)) {
    const auto* fb = as<AbsNode>(b);
    if (fa->params.size() != fb->params.size()) return false;
    for (size_t i = 0; i < fa->params.size(); ++i) {
      if (fa->params[i].name != fb->params[i].name ||
          !type_equal(fa->params[i].type, fb->params[i].type))
        return false;
    }
    return expr_equal(fa->body, fb->body);
  }
  const auto* ta = as<LetNode>(a);
  const auto* tb = as<LetNode>(b);
  return ta->name == tb->name && expr_equal(ta->def, tb->def) &&
         expr_equal(ta->body, tb->body);
}

size_t ast_size(const ExprPtr& e) {
  if (as<LitNode>(e) || as<VarNode>(e) || as<LocalNode>(e)) return 1;
  if (const auto* a = as<AppNode>(e)) {
    size_t n = ast_size(a->fn);
    for (const auto& arg : a->args) n += ast_size(arg);
    return n;
  }
  if (const auto* f = as<AbsNode>(e))
    return 1 + f->params.size() + ast_size(f->body);
  const auto* l = as<LetNode>(e);
  return 2 + ast_size(l->def) + ast_size(l->body);
}

namespace {

// Substitutions do not thread across sibling subtrees here, mirroring how
// the stack compiler types each application in isolation: a polymorphic
// local may be pinned differently at each use site.
TypePtr check_walk(const ExprPtr& e, const TypeEnv& env, FreshNames& fresh) {
  if (const auto* l = as<LitNode>(e)) {
    if (!value_conforms(l->type, l->value))
      throw TypeError("literal value does not inhabit " + to_string(l->type));
    return l->type;
  }
  if (const auto* v = as<VarNode>(e)) {
    const Scheme* s = env.find(v->name);
    if (!s) throw TypeError("unbound variable: " + v->name);
    return s->instantiate(fresh);
  }
  if (const auto* x = as<LocalNode>(e)) {
    const Scheme* s = env.find(x->name);
    if (!s) throw TypeError("unbound local: " + x->name);
    return s->instantiate(fresh);
  }
  if (const auto* a = as<AppNode>(e)) {
    TypePtr tf = check_walk(a->fn, env, fresh);
    std::vector<TypePtr> targs;
    targs.reserve(a->args.size());
    for (const auto& arg : a->args)
      targs.push_back(check_walk(arg, env, fresh));
    TypePtr ret = tvar(fresh.type_var());
    auto u = unify(tf, fn_type(std::move(targs), ret));
    if (!u)
      throw TypeError("cannot apply " + to_string(tf) + " to given arguments");
    return u->apply(ret);
  }
  if (const auto* f = as<AbsNode>(e)) {
    TypeEnv inner = env;
    std::vector<TypePtr> arg_types;
    for (const auto& p : f->params) {
      inner = inner.extended(p.name, Scheme::mono(p.type));
      arg_types.push_back(p.type);
    }
    TypePtr tb = check_walk(f->body, inner, fresh);
    return fn_type(std::move(arg_types), std::move(tb));
  }
  const auto* l = as<LetNode>(e);
  TypePtr td = check_walk(l->def, env, fresh);
  TypeEnv inner = env.extended(l->name, Scheme::mono(td));
  return check_walk(l->body, inner, fresh);
}

}  // namespace

TypePtr check_type(const ExprPtr& e, const TypeEnv& env) {
  FreshNames fresh;
  return check_walk(e, env, fresh);
}

namespace {

void render_source_literal(const Value& v, std::string& out) {
  switch (v.kind()) {
    case ValueKind::Char: {
      char c = v.as_char();
      out += '\\';
      if (c == ' ')
        out += "space";
      else if (c == '\n')
        out += "newline";
      else if (c == '\t')
        out += "tab";
      else
        out += c;
      return;
    }
    case ValueKind::Seq: {
      out += '[';
      const auto& xs = v.as_seq();
      for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        render_source_literal(xs[i], out);
      }
      out += ']';
      return;
    }
    default:
      out += to_literal_text(v);
  }
}

void render_walk(const ExprPtr& e, std::string& out) {
  if (const auto* l = as<LitNode>(e)) {
    render_source_literal(l->value, out);
    return;
  }
  if (const auto* v = as<VarNode>(e)) {
    out += v->name;
    return;
  }
  if (const auto* x = as<LocalNode>(e)) {
    out += x->name;
    return;
  }
  if (const auto* a = as<AppNode>(e)) {
    out += '(';
    render_walk(a->fn, out);
    for (const auto& arg : a->args) {
      out += ' ';
      render_walk(arg, out);
    }
    out += ')';
    return;
  }
  if (const auto* f = as<AbsNode>(e)) {
    out += "(fn [";
    for (size_t i = 0; i < f->params.size(); ++i) {
      if (i) out += ' ';
      out += '^' + to_string(f->params[i].type) + ' ' + f->params[i].name;
    }
    out += "] ";
    render_walk(f->body, out);
    out += ')';
    return;
  }
  const auto* l = as<LetNode>(e);
  out += "(let [" + l->name + ' ';
  render_walk(l->def, out);
  out += "] ";
  render_walk(l->body, out);
  out += ')';
}

}  // namespace

std::string render_expr(const ExprPtr& e) {
  std::string out;
  render_walk(e, out);
  return out;
}

std::string render_source(const TypedAst& program, const std::string& fn_name,
                          const std::vector<std::string>& arg_names) {
  std::string out = "(defn " + fn_name + " [";
  for (size_t i = 0; i < arg_names.size(); ++i) {
    if (i) out += ' ';
    out += arg_names[i];
  }
  out += "] ";
  render_walk(program.expr, out);
  out += ')';
  return out;
}

namespace {

// Minimal s-expression reader for rendered programs.
struct SexprParser {
  std::string_view text;
  size_t pos = 0;
  std::vector<std::string> bound;  // names introduced by enclosing fn/let

  [[noreturn]] void fail(const std::string& why) const {
    throw SourceParseError(why + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    return text[pos];
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  bool is_bound(const std::string& name) const {
    for (const auto& b : bound)
      if (b == name) return true;
    return false;
  }

  std::string read_symbol() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
          c == ')' || c == '[' || c == ']')
        break;
      ++pos;
    }
    if (pos == start) fail("expected symbol");
    return std::string(text.substr(start, pos - start));
  }

  std::string read_string() {
    expect('"');
    std::string out;
    while (pos < text.size() && text[pos] != '"') {
      char c = text[pos++];
      if (c == '\\') {
        if (pos >= text.size()) fail("unterminated escape");
        char e = text[pos++];
        switch (e) {
          case 'n':
            out += '\n';
            break;
          case 't':
            out += '\t';
            break;
          case '\\':
            out += '\\';
            break;
          case '"':
            out += '"';
            break;
          default:
            fail("unknown escape");
        }
      } else {
        out += c;
      }
    }
    if (pos >= text.size()) fail("unterminated string");
    ++pos;
    return out;
  }

  char read_char_literal() {
    ++pos;  // past the backslash
    std::string name = read_symbol();
    if (name == "space") return ' ';
    if (name == "newline") return '\n';
    if (name == "tab") return '\t';
    if (name.size() == 1) return name[0];
    fail("unknown char literal \\" + name);
  }

  // Literal with its type inferred from shape.
  std::pair<Value, TypePtr> read_literal_atom(const std::string& tok) {
    if (tok == "true") return {Value::boolean(true), boolean_type()};
    if (tok == "false") return {Value::boolean(false), boolean_type()};
    if (tok == "nil") return {Value::nil(), nil_type()};
    bool numeric = false, floating = false;
    for (size_t i = 0; i < tok.size(); ++i) {
      char c = tok[i];
      if (std::isdigit(static_cast<unsigned char>(c)))
        numeric = true;
      else if (c == '.' || c == 'e' || c == 'E')
        floating = true;
      else if (!(c == '-' || c == '+'))
        return {Value::nil(), nullptr};  // a symbol, not a literal
    }
    if (!numeric) return {Value::nil(), nullptr};
    if (floating) {
      return {parse_value(tok, double_type()), double_type()};
    }
    return {parse_value(tok, int_type()), int_type()};
  }

  ExprPtr read_sequence_literal() {
    expect('[');
    std::vector<Value> items;
    TypePtr elem;
    while (peek() != ']') {
      ExprPtr e = read_expr();
      const auto* l = as<LitNode>(e);
      if (!l) fail("sequence literals may only contain literals");
      if (!elem) elem = l->type;
      if (!type_equal(elem, l->type))
        fail("mixed element types in sequence literal");
      items.push_back(l->value);
    }
    ++pos;
    if (!elem) fail("empty sequence literal has no type");
    return lit(Value::sequence(std::move(items)), seq_of(elem));
  }

  std::vector<Param> read_fn_params() {
    expect('[');
    std::vector<Param> params;
    while (peek() != ']') {
      TypePtr t;
      if (peek() == '^') {
        ++pos;
        std::string type_text = read_symbol();
        // bracketed ctor params are glued to the symbol by the reader
        while (pos < text.size() && text[pos] == '[') {
          size_t depth = 0;
          do {
            if (text[pos] == '[') ++depth;
            if (text[pos] == ']') --depth;
            type_text += text[pos++];
          } while (pos < text.size() && depth > 0);
        }
        t = parse_type(type_text);
      } else {
        fail("fn parameter missing ^Type hint");
      }
      params.push_back({read_symbol(), std::move(t)});
    }
    ++pos;
    return params;
  }

  ExprPtr read_expr() {
    char c = peek();
    if (c == '(') {
      ++pos;
      skip_ws();
      if (peek() == ')') fail("empty application");
      // fn and let are special forms when they head a list
      size_t save = pos;
      if (std::isalpha(static_cast<unsigned char>(peek()))) {
        std::string head = read_symbol();
        if (head == "fn") {
          std::vector<Param> params = read_fn_params();
          size_t n_bound = bound.size();
          for (const auto& p : params) bound.push_back(p.name);
          ExprPtr body = read_expr();
          bound.resize(n_bound);
          expect(')');
          return abs(std::move(params), std::move(body));
        }
        if (head == "let") {
          expect('[');
          std::string name = read_symbol();
          ExprPtr def = read_expr();
          expect(']');
          bound.push_back(name);
          ExprPtr body = read_expr();
          bound.pop_back();
          expect(')');
          return let_expr(std::move(name), std::move(def), std::move(body));
        }
        pos = save;
      }
      ExprPtr fn = read_expr();
      std::vector<ExprPtr> args;
      while (peek() != ')') args.push_back(read_expr());
      ++pos;
      return app(std::move(fn), std::move(args));
    }
    if (c == '[') return read_sequence_literal();
    if (c == '"') {
      std::string s = read_string();
      return lit(Value::string(std::move(s)), string_type());
    }
    if (c == '\\') {
      char ch = read_char_literal();
      return lit(Value::character(ch), char_type());
    }
    std::string tok = read_symbol();
    auto [v, t] = read_literal_atom(tok);
    if (t) return lit(std::move(v), std::move(t));
    return is_bound(tok) ? local_ref(tok) : var_ref(tok);
  }
};

}  // namespace

ExprPtr parse_expr(std::string_view text) {
  SexprParser p{text, 0, {}};
  ExprPtr e = p.read_expr();
  if (!p.at_end()) throw SourceParseError("trailing input after expression");
  return e;
}

ExprPtr parse_defn(std::string_view text, std::string* name_out,
                   std::vector<std::string>* args_out) {
  SexprParser p{text, 0, {}};
  p.expect('(');
  if (p.read_symbol() != "defn") throw SourceParseError("expected (defn ...)");
  std::string name = p.read_symbol();
  p.expect('[');
  std::vector<std::string> args;
  while (p.peek() != ']') args.push_back(p.read_symbol());
  ++p.pos;
  ExprPtr body = p.read_expr();
  p.expect(')');
  if (!p.at_end()) throw SourceParseError("trailing input after defn");
  if (name_out) *name_out = std::move(name);
  if (args_out) *args_out = std::move(args);
  return body;
}

}  // namespace evolisp
