#include "evolisp/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace evolisp {

namespace {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    signal(RtErrorKind::Overflow, "integer addition overflow");
  return r;
}

int64_t checked_sub(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    signal(RtErrorKind::Overflow, "integer subtraction overflow");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    signal(RtErrorKind::Overflow, "integer multiplication overflow");
  return r;
}

// Truncating division; zero divisor yields 0 rather than an error so the
// protected arithmetic of the search space stays total.
int64_t safe_div_int(int64_t a, int64_t b) {
  if (b == 0) return 0;
  if (a == INT64_MIN && b == -1)
    signal(RtErrorKind::Overflow, "integer division overflow");
  return a / b;
}

// Floored modulus (sign follows the divisor); zero divisor yields 0.
int64_t safe_mod_int(int64_t a, int64_t b) {
  if (b == 0) return 0;
  if (a == INT64_MIN && b == -1) return 0;
  int64_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

int64_t double_to_int(double d) {
  if (!(d >= -9.2e18 && d <= 9.2e18))
    signal(RtErrorKind::Overflow, "double out of integer range");
  return static_cast<int64_t>(d);
}

using Args = std::span<const Value>;

Value call_func(const Value& f, std::span<const Value> args, Budget& b) {
  const FuncObj& fo = *f.as_func();
  if (fo.arity != args.size())
    signal(RtErrorKind::Other, fo.name + " arity mismatch");
  b.charge();
  return fo.call(args, b);
}

Builtin make(std::string id, std::string name, const char* scheme_text,
             std::string doc,
             std::function<Value(Args, Budget&)> fn) {
  Scheme scheme = parse_scheme(scheme_text);
  size_t arity = scheme.body()->params.size();
  Value func = make_builtin_func(name, arity, std::move(fn));
  return Builtin{std::move(id), std::move(name), std::move(scheme),
                 std::move(doc), std::move(func)};
}

std::vector<Builtin> build_library() {
  std::vector<Builtin> lib;
  auto add = [&](std::string id, std::string name, const char* scheme,
                 std::string doc, std::function<Value(Args, Budget&)> fn) {
    lib.push_back(
        make(std::move(id), std::move(name), scheme, std::move(doc),
             std::move(fn)));
  };

  // integer arithmetic
  add("add-int", "+", "(Int, Int) -> Int", "integer addition",
      [](Args a, Budget&) {
        return Value::integer(checked_add(a[0].as_int(), a[1].as_int()));
      });
  add("sub-int", "-", "(Int, Int) -> Int", "integer subtraction",
      [](Args a, Budget&) {
        return Value::integer(checked_sub(a[0].as_int(), a[1].as_int()));
      });
  add("mul-int", "*", "(Int, Int) -> Int", "integer multiplication",
      [](Args a, Budget&) {
        return Value::integer(checked_mul(a[0].as_int(), a[1].as_int()));
      });
  add("safe-div-int", "safe-div", "(Int, Int) -> Int",
      "truncating division; 0 when the divisor is 0", [](Args a, Budget&) {
        return Value::integer(safe_div_int(a[0].as_int(), a[1].as_int()));
      });
  add("safe-mod-int", "safe-mod", "(Int, Int) -> Int",
      "floored modulus; 0 when the divisor is 0", [](Args a, Budget&) {
        return Value::integer(safe_mod_int(a[0].as_int(), a[1].as_int()));
      });
  add("min-int", "min", "(Int, Int) -> Int", "smaller of two integers",
      [](Args a, Budget&) {
        return Value::integer(std::min(a[0].as_int(), a[1].as_int()));
      });
  add("max-int", "max", "(Int, Int) -> Int", "larger of two integers",
      [](Args a, Budget&) {
        return Value::integer(std::max(a[0].as_int(), a[1].as_int()));
      });
  add("inc", "inc", "Int -> Int", "adds 1", [](Args a, Budget&) {
    return Value::integer(checked_add(a[0].as_int(), 1));
  });
  add("dec", "dec", "Int -> Int", "subtracts 1", [](Args a, Budget&) {
    return Value::integer(checked_sub(a[0].as_int(), 1));
  });
  add("abs-int", "abs", "Int -> Int", "absolute value", [](Args a, Budget&) {
    int64_t v = a[0].as_int();
    if (v == INT64_MIN)
      signal(RtErrorKind::Overflow, "abs overflow");
    return Value::integer(v < 0 ? -v : v);
  });
  add("odd?", "odd?", "Int -> Boolean", "true for odd integers",
      [](Args a, Budget&) {
        return Value::boolean(safe_mod_int(a[0].as_int(), 2) == 1);
      });
  add("even?", "even?", "Int -> Boolean", "true for even integers",
      [](Args a, Budget&) {
        return Value::boolean(safe_mod_int(a[0].as_int(), 2) == 0);
      });

  // integer comparisons
  add("lt-int", "<", "(Int, Int) -> Boolean", "strictly less",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_int() < a[1].as_int());
      });
  add("le-int", "<=", "(Int, Int) -> Boolean", "less or equal",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_int() <= a[1].as_int());
      });
  add("gt-int", ">", "(Int, Int) -> Boolean", "strictly greater",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_int() > a[1].as_int());
      });
  add("ge-int", ">=", "(Int, Int) -> Boolean", "greater or equal",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_int() >= a[1].as_int());
      });

  // double arithmetic
  add("add-double", "+", "(Double, Double) -> Double", "double addition",
      [](Args a, Budget&) {
        return Value::real(a[0].as_double() + a[1].as_double());
      });
  add("sub-double", "-", "(Double, Double) -> Double", "double subtraction",
      [](Args a, Budget&) {
        return Value::real(a[0].as_double() - a[1].as_double());
      });
  add("mul-double", "*", "(Double, Double) -> Double",
      "double multiplication", [](Args a, Budget&) {
        return Value::real(a[0].as_double() * a[1].as_double());
      });
  add("safe-div-double", "safe-div", "(Double, Double) -> Double",
      "division; 0.0 when the divisor is 0.0", [](Args a, Budget&) {
        double d = a[1].as_double();
        return Value::real(d == 0.0 ? 0.0 : a[0].as_double() / d);
      });
  add("min-double", "min", "(Double, Double) -> Double",
      "smaller of two doubles", [](Args a, Budget&) {
        return Value::real(std::fmin(a[0].as_double(), a[1].as_double()));
      });
  add("max-double", "max", "(Double, Double) -> Double",
      "larger of two doubles", [](Args a, Budget&) {
        return Value::real(std::fmax(a[0].as_double(), a[1].as_double()));
      });
  add("abs-double", "abs", "Double -> Double", "absolute value",
      [](Args a, Budget&) { return Value::real(std::fabs(a[0].as_double())); });

  // double comparisons
  add("lt-double", "<", "(Double, Double) -> Boolean", "strictly less",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_double() < a[1].as_double());
      });
  add("le-double", "<=", "(Double, Double) -> Boolean", "less or equal",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_double() <= a[1].as_double());
      });
  add("gt-double", ">", "(Double, Double) -> Boolean", "strictly greater",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_double() > a[1].as_double());
      });
  add("ge-double", ">=", "(Double, Double) -> Boolean", "greater or equal",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_double() >= a[1].as_double());
      });

  // conversions
  add("int-to-double", "float", "Int -> Double", "integer to double",
      [](Args a, Budget&) {
        return Value::real(static_cast<double>(a[0].as_int()));
      });
  add("double-to-int", "int", "Double -> Int",
      "double to integer, truncating toward zero", [](Args a, Budget&) {
        return Value::integer(double_to_int(a[0].as_double()));
      });

  // booleans; all arguments are evaluated before the call
  add("and", "and", "(Boolean, Boolean) -> Boolean", "logical and (eager)",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_bool() && a[1].as_bool());
      });
  add("or", "or", "(Boolean, Boolean) -> Boolean", "logical or (eager)",
      [](Args a, Budget&) {
        return Value::boolean(a[0].as_bool() || a[1].as_bool());
      });
  add("not", "not", "Boolean -> Boolean", "logical negation",
      [](Args a, Budget&) { return Value::boolean(!a[0].as_bool()); });

  // polymorphic comparisons and branching
  add("eq", "=", "forall a. (a, a) -> Boolean", "structural equality",
      [](Args a, Budget&) { return Value::boolean(a[0] == a[1]); });
  add("neq", "not=", "forall a. (a, a) -> Boolean", "structural inequality",
      [](Args a, Budget&) { return Value::boolean(!(a[0] == a[1])); });
  add("if", "if", "forall a. (Boolean, a, a) -> a",
      "selects the second or third argument (eager)", [](Args a, Budget&) {
        return a[0].as_bool() ? a[1] : a[2];
      });

  // chars
  add("char-to-int", "char-to-int", "Char -> Int", "character code",
      [](Args a, Budget&) {
        return Value::integer(static_cast<unsigned char>(a[0].as_char()));
      });
  add("is-whitespace", "whitespace?", "Char -> Boolean",
      "true for space, tab, or newline", [](Args a, Budget&) {
        char c = a[0].as_char();
        return Value::boolean(c == ' ' || c == '\t' || c == '\n');
      });

  // strings
  add("length", "length", "String -> Int", "number of characters",
      [](Args a, Budget&) {
        return Value::integer(static_cast<int64_t>(a[0].as_string().size()));
      });
  add("concat", "concat", "(String, String) -> String",
      "string concatenation", [](Args a, Budget& b) {
        const auto& x = a[0].as_string();
        const auto& y = a[1].as_string();
        b.charge(static_cast<int64_t>(x.size() + y.size()));
        return Value::string(x + y);
      });
  add("str", "str", "forall a. a -> String", "display text of any value",
      [](Args a, Budget& b) {
        std::string s = to_display_string(a[0]);
        b.charge(static_cast<int64_t>(s.size()));
        return Value::string(std::move(s));
      });
  add("replace-char", "replace-char", "(String, Char, Char) -> String",
      "replaces every occurrence of a character", [](Args a, Budget& b) {
        std::string s = a[0].as_string();
        b.charge(static_cast<int64_t>(s.size()));
        char from = a[1].as_char(), to = a[2].as_char();
        for (char& c : s)
          if (c == from) c = to;
        return Value::string(std::move(s));
      });
  add("occurrences-of-char", "occurrences-of-char",
      "(String, Char) -> Int", "count of a character in a string",
      [](Args a, Budget& b) {
        const auto& s = a[0].as_string();
        b.charge(static_cast<int64_t>(s.size()));
        char c = a[1].as_char();
        return Value::integer(std::count(s.begin(), s.end(), c));
      });
  add("string-empty?", "empty-str?", "String -> Boolean",
      "true for the empty string", [](Args a, Budget&) {
        return Value::boolean(a[0].as_string().empty());
      });

  // sequences
  add("count", "count", "forall a. Sequence[a] -> Int", "number of elements",
      [](Args a, Budget&) {
        return Value::integer(static_cast<int64_t>(a[0].as_seq().size()));
      });
  add("seq-empty?", "empty?", "forall a. Sequence[a] -> Boolean",
      "true for the empty sequence", [](Args a, Budget&) {
        return Value::boolean(a[0].as_seq().empty());
      });
  add("first", "first", "forall a. Sequence[a] -> a", "first element",
      [](Args a, Budget&) {
        const auto& xs = a[0].as_seq();
        if (xs.empty())
          signal(RtErrorKind::IndexOutOfBounds, "first of empty sequence");
        return xs.front();
      });
  add("last", "last", "forall a. Sequence[a] -> a", "last element",
      [](Args a, Budget&) {
        const auto& xs = a[0].as_seq();
        if (xs.empty())
          signal(RtErrorKind::IndexOutOfBounds, "last of empty sequence");
        return xs.back();
      });
  add("rest", "rest", "forall a. Sequence[a] -> Sequence[a]",
      "everything after the first element", [](Args a, Budget& b) {
        const auto& xs = a[0].as_seq();
        b.charge(static_cast<int64_t>(xs.size()));
        if (xs.empty()) return a[0];
        return Value::sequence(std::vector<Value>(xs.begin() + 1, xs.end()));
      });
  add("butlast", "butlast", "forall a. Sequence[a] -> Sequence[a]",
      "everything before the last element", [](Args a, Budget& b) {
        const auto& xs = a[0].as_seq();
        b.charge(static_cast<int64_t>(xs.size()));
        if (xs.empty()) return a[0];
        return Value::sequence(std::vector<Value>(xs.begin(), xs.end() - 1));
      });
  add("reverse", "reverse", "forall a. Sequence[a] -> Sequence[a]",
      "elements in reverse order", [](Args a, Budget& b) {
        const auto& xs = a[0].as_seq();
        b.charge(static_cast<int64_t>(xs.size()));
        return Value::sequence(std::vector<Value>(xs.rbegin(), xs.rend()));
      });
  add("append", "append", "forall a. (Sequence[a], a) -> Sequence[a]",
      "sequence with one element added at the end", [](Args a, Budget& b) {
        std::vector<Value> xs = a[0].as_seq();
        b.charge(static_cast<int64_t>(xs.size()));
        xs.push_back(a[1]);
        return Value::sequence(std::move(xs));
      });
  add("nth", "nth", "forall a. (Sequence[a], Int) -> a",
      "element at an index; out of range is an error", [](Args a, Budget&) {
        const auto& xs = a[0].as_seq();
        int64_t i = a[1].as_int();
        if (i < 0 || static_cast<size_t>(i) >= xs.size())
          signal(RtErrorKind::IndexOutOfBounds,
                 "nth index " + std::to_string(i) + " of " +
                     std::to_string(xs.size()));
        return xs[static_cast<size_t>(i)];
      });
  add("index-of", "index-of", "forall a. (Sequence[a], a) -> Int",
      "index of the first occurrence, -1 if absent", [](Args a, Budget& b) {
        const auto& xs = a[0].as_seq();
        b.charge(static_cast<int64_t>(xs.size()));
        for (size_t i = 0; i < xs.size(); ++i)
          if (xs[i] == a[1]) return Value::integer(static_cast<int64_t>(i));
        return Value::integer(-1);
      });
  add("range", "range", "Int -> Sequence[Int]",
      "integers 0..n-1; empty when n <= 0", [](Args a, Budget& b) {
        int64_t n = a[0].as_int();
        if (n < 0) n = 0;
        if (n > 100000)
          signal(RtErrorKind::Other, "range too long");
        b.charge(n);
        std::vector<Value> xs;
        xs.reserve(static_cast<size_t>(n));
        for (int64_t i = 0; i < n; ++i) xs.push_back(Value::integer(i));
        return Value::sequence(std::move(xs));
      });

  // higher-order
  add("map", "map", "forall a b. ((a -> b), Sequence[a]) -> Sequence[b]",
      "applies a function to every element", [](Args a, Budget& b) {
        const auto& xs = a[1].as_seq();
        std::vector<Value> out;
        out.reserve(xs.size());
        for (const auto& x : xs) {
          const Value arg[] = {x};
          out.push_back(call_func(a[0], arg, b));
        }
        return Value::sequence(std::move(out));
      });
  add("map2", "map2",
      "forall a b c. (((a, b) -> c), Sequence[a], Sequence[b]) -> Sequence[c]",
      "applies a binary function pairwise, up to the shorter input",
      [](Args a, Budget& b) {
        const auto& xs = a[1].as_seq();
        const auto& ys = a[2].as_seq();
        size_t n = std::min(xs.size(), ys.size());
        std::vector<Value> out;
        out.reserve(n);
        for (size_t i = 0; i < n; ++i) {
          const Value arg[] = {xs[i], ys[i]};
          out.push_back(call_func(a[0], arg, b));
        }
        return Value::sequence(std::move(out));
      });
  add("filter", "filter",
      "forall a. ((a -> Boolean), Sequence[a]) -> Sequence[a]",
      "keeps elements the predicate accepts", [](Args a, Budget& b) {
        const auto& xs = a[1].as_seq();
        std::vector<Value> out;
        for (const auto& x : xs) {
          const Value arg[] = {x};
          if (call_func(a[0], arg, b).as_bool()) out.push_back(x);
        }
        return Value::sequence(std::move(out));
      });
  add("reduce", "reduce", "forall a. (((a, a) -> a), Sequence[a]) -> a",
      "folds a sequence with its first element as the seed; empty is an "
      "error",
      [](Args a, Budget& b) {
        const auto& xs = a[1].as_seq();
        if (xs.empty())
          signal(RtErrorKind::IndexOutOfBounds, "reduce of empty sequence");
        Value acc = xs.front();
        for (size_t i = 1; i < xs.size(); ++i) {
          const Value arg[] = {acc, xs[i]};
          acc = call_func(a[0], arg, b);
        }
        return acc;
      });
  add("fold", "fold",
      "forall a b. (((b, a) -> b), b, Sequence[a]) -> b",
      "folds a sequence from an explicit seed", [](Args a, Budget& b) {
        Value acc = a[1];
        for (const auto& x : a[2].as_seq()) {
          const Value arg[] = {acc, x};
          acc = call_func(a[0], arg, b);
        }
        return acc;
      });
  add("unlines", "unlines", "Sequence[String] -> String",
      "joins strings with newlines", [](Args a, Budget& b) {
        const auto& xs = a[0].as_seq();
        std::string out;
        for (size_t i = 0; i < xs.size(); ++i) {
          if (i) out += '\n';
          out += xs[i].as_string();
        }
        b.charge(static_cast<int64_t>(out.size()));
        return Value::string(std::move(out));
      });

  return lib;
}

void mentioned_names(const TypePtr& t, std::unordered_set<std::string>& out) {
  switch (t->kind) {
    case TypeKind::Var:
      return;
    case TypeKind::Ground:
      out.insert(t->name);
      return;
    case TypeKind::Ctor:
      out.insert(t->name);
      break;
    case TypeKind::Fn:
      break;
  }
  for (const auto& p : t->params) mentioned_names(p, out);
  if (t->ret) mentioned_names(t->ret, out);
}

}  // namespace

const std::vector<Builtin>& builtin_library() {
  static const std::vector<Builtin> lib = build_library();
  return lib;
}

std::vector<Builtin> builtins_for(
    const std::vector<TypePtr>& relevant_types) {
  std::unordered_set<std::string> allowed;
  for (const auto& t : relevant_types) mentioned_names(t, allowed);

  std::vector<Builtin> filtered;
  for (const Builtin& b : builtin_library()) {
    std::unordered_set<std::string> used;
    mentioned_names(b.scheme.body(), used);
    bool ok = true;
    for (const auto& name : used)
      ok = ok && allowed.count(name) > 0;
    if (ok) filtered.push_back(b);
  }

  // Resolve display-name collisions: the Double-mentioning entry wins so a
  // problem over both numeric types gets float arithmetic.
  std::vector<Builtin> out;
  std::unordered_map<std::string, size_t> by_name;
  for (const Builtin& b : filtered) {
    std::unordered_set<std::string> used;
    mentioned_names(b.scheme.body(), used);
    bool is_double = used.count("Double") > 0;
    auto it = by_name.find(b.name);
    if (it == by_name.end()) {
      by_name.emplace(b.name, out.size());
      out.push_back(b);
    } else if (is_double) {
      out[it->second] = b;
    }
  }
  return out;
}

TypeEnv env_of(const std::vector<Builtin>& builtins) {
  TypeEnv env;
  for (const Builtin& b : builtins) env.bind(b.name, b.scheme);
  return env;
}

BuiltinTable table_of(const std::vector<Builtin>& builtins) {
  BuiltinTable table;
  for (const Builtin& b : builtins) table.emplace(b.name, b.func);
  return table;
}

std::string builtin_reference(const std::vector<Builtin>& builtins) {
  std::string out = "| name | type | semantics |\n|---|---|---|\n";
  for (const Builtin& b : builtins) {
    out += "| `" + b.name + "` | `" + to_string(b.scheme) + "` | " + b.doc +
           " |\n";
  }
  return out;
}

}  // namespace evolisp
