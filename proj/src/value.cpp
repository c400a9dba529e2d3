#include "evolisp/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace evolisp {

const char* to_string(RtErrorKind kind) {
  switch (kind) {
    case RtErrorKind::IndexOutOfBounds:
      return "index-out-of-bounds";
    case RtErrorKind::DivideByZero:
      return "divide-by-zero";
    case RtErrorKind::Overflow:
      return "overflow";
    case RtErrorKind::Timeout:
      return "timeout";
    case RtErrorKind::Other:
      return "other";
  }
  return "other";
}

const char* to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::Bool:
      return "Boolean";
    case ValueKind::Int:
      return "Int";
    case ValueKind::Double:
      return "Double";
    case ValueKind::Char:
      return "Char";
    case ValueKind::Str:
      return "String";
    case ValueKind::Nil:
      return "Nil";
    case ValueKind::Seq:
      return "Sequence";
    case ValueKind::Func:
      return "Function";
  }
  return "?";
}

Value Value::sequence(std::vector<Value> items) {
  return Value(std::make_shared<const std::vector<Value>>(std::move(items)));
}

ValueKind Value::kind() const {
  switch (v_.index()) {
    case 0:
      return ValueKind::Bool;
    case 1:
      return ValueKind::Int;
    case 2:
      return ValueKind::Double;
    case 3:
      return ValueKind::Char;
    case 4:
      return ValueKind::Str;
    case 5:
      return ValueKind::Nil;
    case 6:
      return ValueKind::Seq;
    default:
      return ValueKind::Func;
  }
}

template <>
const char* Value::kind_name<bool>() {
  return "Boolean";
}
template <>
const char* Value::kind_name<int64_t>() {
  return "Int";
}
template <>
const char* Value::kind_name<double>() {
  return "Double";
}
template <>
const char* Value::kind_name<char>() {
  return "Char";
}
template <>
const char* Value::kind_name<std::string>() {
  return "String";
}
template <>
const char* Value::kind_name<SeqPtr>() {
  return "Sequence";
}
template <>
const char* Value::kind_name<FuncPtr>() {
  return "Function";
}

bool operator==(const Value& a, const Value& b) {
  if (a.v_.index() != b.v_.index()) return false;
  if (a.kind() == ValueKind::Seq) {
    const auto& xs = a.as_seq();
    const auto& ys = b.as_seq();
    if (xs.size() != ys.size()) return false;
    for (size_t i = 0; i < xs.size(); ++i)
      if (xs[i] != ys[i]) return false;
    return true;
  }
  if (a.kind() == ValueKind::Func)
    return a.as_func().get() == b.as_func().get();
  return a.v_ == b.v_;
}

Value make_builtin_func(
    std::string name, size_t arity,
    std::function<Value(std::span<const Value>, Budget&)> fn) {
  auto obj = std::make_shared<FuncObj>();
  obj->name = std::move(name);
  obj->arity = arity;
  obj->call = std::move(fn);
  return Value::function(std::move(obj));
}

std::string format_double(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, end);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
    s += ".0";
  return s;
}

namespace {

void append_escaped(std::string& out, char c, char quote) {
  switch (c) {
    case '\n':
      out += "\\n";
      return;
    case '\t':
      out += "\\t";
      return;
    case '\\':
      out += "\\\\";
      return;
    default:
      if (c == quote) {
        out += '\\';
        out += c;
      } else {
        out += c;
      }
  }
}

void render_literal(const Value& v, std::string& out) {
  switch (v.kind()) {
    case ValueKind::Bool:
      out += v.as_bool() ? "true" : "false";
      return;
    case ValueKind::Int:
      out += std::to_string(v.as_int());
      return;
    case ValueKind::Double:
      out += format_double(v.as_double());
      return;
    case ValueKind::Char:
      out += '\'';
      append_escaped(out, v.as_char(), '\'');
      out += '\'';
      return;
    case ValueKind::Str: {
      out += '"';
      for (char c : v.as_string()) append_escaped(out, c, '"');
      out += '"';
      return;
    }
    case ValueKind::Nil:
      out += "nil";
      return;
    case ValueKind::Seq: {
      out += '[';
      const auto& xs = v.as_seq();
      for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        render_literal(xs[i], out);
      }
      out += ']';
      return;
    }
    case ValueKind::Func:
      out += "#fn<" + v.as_func()->name + ">";
      return;
  }
}

}  // namespace

std::string to_literal_text(const Value& v) {
  std::string out;
  render_literal(v, out);
  return out;
}

std::string to_typed_text(const Value& v, const TypePtr& t) {
  return to_literal_text(v) + ":" + to_string(t);
}

namespace {

struct ValueCursor {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ValueParseError(why + " in literal: " + std::string(text));
  }

  char unescape() {
    if (pos >= text.size()) fail("unterminated escape");
    char c = text[pos++];
    if (c != '\\') return c;
    if (pos >= text.size()) fail("unterminated escape");
    char e = text[pos++];
    switch (e) {
      case 'n':
        return '\n';
      case 't':
        return '\t';
      case '\\':
        return '\\';
      case '\'':
        return '\'';
      case '"':
        return '"';
      default:
        fail(std::string("unknown escape \\") + e);
    }
  }

  Value parse(const TypePtr& type) {
    skip_ws();
    if (pos >= text.size()) fail("empty literal");
    if (type->kind == TypeKind::Ground) {
      if (type->name == "Boolean") {
        if (text.compare(pos, 4, "true") == 0) {
          pos += 4;
          return Value::boolean(true);
        }
        if (text.compare(pos, 5, "false") == 0) {
          pos += 5;
          return Value::boolean(false);
        }
        fail("expected boolean");
      }
      if (type->name == "Int") {
        int64_t out = 0;
        auto [p, ec] =
            std::from_chars(text.data() + pos, text.data() + text.size(), out);
        if (ec != std::errc()) fail("expected integer");
        pos = static_cast<size_t>(p - text.data());
        return Value::integer(out);
      }
      if (type->name == "Double") {
        // from_chars<double> exists in this toolchain but strtod keeps the
        // grammar laxer (leading +, inf spellings) for hand-written files.
        std::string tail(text.substr(pos));
        char* end = nullptr;
        double out = std::strtod(tail.c_str(), &end);
        if (end == tail.c_str()) fail("expected double");
        pos += static_cast<size_t>(end - tail.c_str());
        return Value::real(out);
      }
      if (type->name == "Char") {
        if (text[pos] != '\'') fail("expected char quote");
        ++pos;
        char c = unescape();
        if (pos >= text.size() || text[pos] != '\'')
          fail("unterminated char literal");
        ++pos;
        return Value::character(c);
      }
      if (type->name == "String") {
        if (text[pos] != '"') fail("expected string quote");
        ++pos;
        std::string out;
        while (pos < text.size() && text[pos] != '"') out += unescape();
        if (pos >= text.size()) fail("unterminated string literal");
        ++pos;
        return Value::string(std::move(out));
      }
      if (type->name == "Nil") {
        if (text.compare(pos, 3, "nil") == 0) {
          pos += 3;
          return Value::nil();
        }
        fail("expected nil");
      }
      fail("no literal form for type " + type->name);
    }
    if (type->kind == TypeKind::Ctor && type->name == "Sequence") {
      if (text[pos] != '[') fail("expected [");
      ++pos;
      std::vector<Value> items;
      skip_ws();
      while (pos < text.size() && text[pos] != ']') {
        items.push_back(parse(type->params[0]));
        skip_ws();
      }
      if (pos >= text.size()) fail("unterminated sequence literal");
      ++pos;
      return Value::sequence(std::move(items));
    }
    fail("no literal form for type " + to_string(type));
  }

  // Skips one literal without knowing its type, for locating the ":<type>"
  // suffix of a typed literal.
  void skip_literal() {
    skip_ws();
    if (pos >= text.size()) fail("empty literal");
    char c = text[pos];
    if (c == '"' || c == '\'') {
      char quote = c;
      ++pos;
      while (pos < text.size() && text[pos] != quote) {
        if (text[pos] == '\\') ++pos;
        ++pos;
      }
      if (pos >= text.size()) fail("unterminated quoted literal");
      ++pos;
      return;
    }
    if (c == '[') {
      ++pos;
      skip_ws();
      while (pos < text.size() && text[pos] != ']') {
        skip_literal();
        skip_ws();
      }
      if (pos >= text.size()) fail("unterminated sequence literal");
      ++pos;
      return;
    }
    while (pos < text.size() && text[pos] != ':' && text[pos] != ']' &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
};

}  // namespace

Value parse_value(std::string_view text, const TypePtr& type) {
  ValueCursor cur{text};
  Value v = cur.parse(type);
  cur.skip_ws();
  if (cur.pos != text.size())
    throw ValueParseError("trailing input after literal: " +
                          std::string(text));
  return v;
}

std::pair<Value, TypePtr> parse_typed_value(std::string_view text) {
  ValueCursor cur{text};
  cur.skip_literal();
  cur.skip_ws();
  if (cur.pos >= text.size() || text[cur.pos] != ':')
    throw ValueParseError("missing :type suffix in: " + std::string(text));
  std::string_view literal = text.substr(0, cur.pos);
  TypePtr type = parse_type(text.substr(cur.pos + 1));
  return {parse_value(literal, type), type};
}

bool value_conforms(const TypePtr& t, const Value& v) {
  switch (t->kind) {
    case TypeKind::Var:
      return true;
    case TypeKind::Ground:
      if (t->name == "Boolean") return v.kind() == ValueKind::Bool;
      if (t->name == "Int") return v.kind() == ValueKind::Int;
      if (t->name == "Double") return v.kind() == ValueKind::Double;
      if (t->name == "Char") return v.kind() == ValueKind::Char;
      if (t->name == "String") return v.kind() == ValueKind::Str;
      if (t->name == "Nil") return v.kind() == ValueKind::Nil;
      return false;
    case TypeKind::Ctor: {
      if (t->name != "Sequence" || v.kind() != ValueKind::Seq) return false;
      for (const auto& item : v.as_seq())
        if (!value_conforms(t->params[0], item)) return false;
      return true;
    }
    case TypeKind::Fn:
      return v.kind() == ValueKind::Func &&
             v.as_func()->arity == t->params.size();
  }
  return false;
}

namespace {

void render_display(const Value& v, std::string& out) {
  switch (v.kind()) {
    case ValueKind::Str:
      out += v.as_string();
      return;
    case ValueKind::Char:
      out += v.as_char();
      return;
    case ValueKind::Nil:
      return;
    case ValueKind::Seq: {
      out += '[';
      const auto& xs = v.as_seq();
      for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        render_display(xs[i], out);
      }
      out += ']';
      return;
    }
    default:
      render_literal(v, out);
  }
}

}  // namespace

std::string to_display_string(const Value& v) {
  std::string out;
  render_display(v, out);
  return out;
}

}  // namespace evolisp
