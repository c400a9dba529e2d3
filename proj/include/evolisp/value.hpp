#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evolisp/types.hpp"

namespace evolisp {

class Value;
using SeqPtr = std::shared_ptr<const std::vector<Value>>;

enum class RtErrorKind {
  IndexOutOfBounds,
  DivideByZero,
  Overflow,
  Timeout,
  Other,
};

const char* to_string(RtErrorKind kind);

// The runtime's error result. Evaluation either yields a Value or one of
// these; errors never escape as C++ exceptions past the evaluator boundary.
struct RuntimeError {
  RtErrorKind kind;
  std::string detail;
};

// Thrown inside the evaluator and builtins, caught by evaluate().
struct RuntimeSignal {
  RuntimeError error;
};

[[noreturn]] inline void signal(RtErrorKind kind, std::string detail) {
  throw RuntimeSignal{{kind, std::move(detail)}};
}

// Step budget shared across one evaluation. Exhaustion signals Timeout, so
// non-terminating recursion schemes are cut off deterministically.
struct Budget {
  int64_t steps_left;
  void charge(int64_t n = 1) {
    steps_left -= n;
    if (steps_left < 0) signal(RtErrorKind::Timeout, "step budget exhausted");
  }
};

constexpr int64_t kDefaultStepBudget = 100000;

struct FuncObj;
using FuncPtr = std::shared_ptr<const FuncObj>;

enum class ValueKind { Bool, Int, Double, Char, Str, Nil, Seq, Func };

const char* to_string(ValueKind kind);

class Value {
 public:
  Value() : v_(NilTag{}) {}

  static Value boolean(bool b) { return Value(b); }
  static Value integer(int64_t i) { return Value(i); }
  static Value real(double d) { return Value(d); }
  static Value character(char c) { return Value(c); }
  static Value string(std::string s) { return Value(std::move(s)); }
  static Value nil() { return Value(); }
  static Value sequence(std::vector<Value> items);
  static Value sequence(SeqPtr items) { return Value(std::move(items)); }
  static Value function(FuncPtr f) { return Value(std::move(f)); }

  ValueKind kind() const;

  bool as_bool() const { return get<bool>(); }
  int64_t as_int() const { return get<int64_t>(); }
  double as_double() const { return get<double>(); }
  char as_char() const { return get<char>(); }
  const std::string& as_string() const { return get<std::string>(); }
  const std::vector<Value>& as_seq() const { return *get<SeqPtr>(); }
  const SeqPtr& seq_ptr() const { return get<SeqPtr>(); }
  const FuncPtr& as_func() const { return get<FuncPtr>(); }

  // Structural equality; functions compare by identity.
  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

 private:
  struct NilTag {
    bool operator==(const NilTag&) const { return true; }
  };

  explicit Value(bool b) : v_(b) {}
  explicit Value(int64_t i) : v_(i) {}
  explicit Value(double d) : v_(d) {}
  explicit Value(char c) : v_(c) {}
  explicit Value(std::string s) : v_(std::move(s)) {}
  explicit Value(SeqPtr s) : v_(std::move(s)) {}
  explicit Value(FuncPtr f) : v_(std::move(f)) {}

  template <typename T>
  const T& get() const {
    const T* p = std::get_if<T>(&v_);
    if (!p)
      signal(RtErrorKind::Other,
             std::string("value is not a ") + kind_name<T>());
    return *p;
  }

  template <typename T>
  static const char* kind_name();

  std::variant<bool, int64_t, double, char, std::string, NilTag, SeqPtr,
               FuncPtr>
      v_;
};

// A callable runtime value: builtins and compiled fn abstractions.
struct FuncObj {
  std::string name;  // display name, for rendering and error messages
  size_t arity;
  std::function<Value(std::span<const Value>, Budget&)> call;
};

Value make_builtin_func(std::string name, size_t arity,
                        std::function<Value(std::span<const Value>, Budget&)> fn);

// Shortest round-trip text for a double, always containing '.' or 'e'.
std::string format_double(double d);

// Machine-readable literal text, round-trippable through parse_value:
//   42   -3.5   true   'x'   '\n'   "a b"   [1 2 3]   nil
std::string to_literal_text(const Value& v);

// Literal plus its type, e.g. "[1 2]:Sequence[Int]".
std::string to_typed_text(const Value& v, const TypePtr& t);

struct ValueParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Type-directed parse of the literal text format.
Value parse_value(std::string_view text, const TypePtr& type);
// Parses "<literal>:<type>".
std::pair<Value, TypePtr> parse_typed_value(std::string_view text);

// Runtime counterpart of the static types: does v inhabit t? Type variables
// accept anything; function values only check arity.
bool value_conforms(const TypePtr& t, const Value& v);

// What (str x) produces: strings and chars bare, doubles with a decimal
// point, sequences bracketed, nil empty.
std::string to_display_string(const Value& v);

}  // namespace evolisp
