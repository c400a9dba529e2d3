#include "test_util.hpp"

using namespace evolisp;

namespace {

EvalResult eval_on(const ProblemSpec& p, const std::string& body,
                   std::vector<std::pair<std::string, Value>> args = {},
                   int64_t budget = kDefaultStepBudget) {
  return evaluate(parse_expr(body), args, p.table, budget);
}

Value val(const EvalResult& r) {
  REQUIRE(!is_error(r));
  return result_value(r);
}

}  // namespace

TEST_CASE("value equality is structural and kind-strict") {
  CHECK(Value::integer(1) == Value::integer(1));
  CHECK(Value::integer(1) != Value::real(1.0));
  CHECK(Value::sequence({Value::integer(1), Value::integer(2)}) ==
        Value::sequence({Value::integer(1), Value::integer(2)}));
  CHECK(Value::sequence({Value::integer(1)}) !=
        Value::sequence({Value::integer(2)}));
  CHECK(Value::nil() == Value::nil());
  CHECK(Value::string("a") != Value::character('a'));
}

TEST_CASE("doubles format shortest with a mandatory point") {
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(-2.0) == "-2.0");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e300) == "1e+300");
}

TEST_CASE("literal text round-trips through parse_value") {
  auto roundtrip = [](const Value& v, const TypePtr& t) {
    std::string text = to_literal_text(v);
    CAPTURE(text);
    CHECK(parse_value(text, t) == v);
    auto [pv, pt] = parse_typed_value(to_typed_text(v, t));
    CHECK(pv == v);
    CHECK(type_equal(pt, t));
  };
  roundtrip(Value::integer(-42), int_type());
  roundtrip(Value::real(2.5), double_type());
  roundtrip(Value::boolean(false), boolean_type());
  roundtrip(Value::character('\n'), char_type());
  roundtrip(Value::character('\''), char_type());
  roundtrip(Value::string("a \"b\"\n"), string_type());
  roundtrip(Value::nil(), nil_type());
  roundtrip(Value::sequence({Value::integer(1), Value::integer(2)}),
            seq_of(int_type()));
  roundtrip(Value::sequence(std::vector<Value>{}), seq_of(string_type()));
  CHECK_THROWS_AS(parse_value("true", int_type()), ValueParseError);
  CHECK_THROWS_AS(parse_value("1 2", int_type()), ValueParseError);
}

TEST_CASE("value_conforms checks shapes at runtime") {
  CHECK(value_conforms(int_type(), Value::integer(3)));
  CHECK_FALSE(value_conforms(int_type(), Value::real(3.0)));
  CHECK(value_conforms(tvar("a"), Value::string("anything")));
  CHECK(value_conforms(seq_of(int_type()),
                       Value::sequence({Value::integer(1)})));
  CHECK_FALSE(value_conforms(seq_of(int_type()),
                             Value::sequence({Value::boolean(true)})));
  CHECK(value_conforms(seq_of(int_type()), Value::sequence(std::vector<Value>{})));
}

TEST_CASE("display strings follow str semantics") {
  CHECK(to_display_string(Value::string("ab")) == "ab");
  CHECK(to_display_string(Value::character('x')) == "x");
  CHECK(to_display_string(Value::integer(-3)) == "-3");
  CHECK(to_display_string(Value::real(2.0)) == "2.0");
  CHECK(to_display_string(Value::nil()).empty());
}

TEST_CASE("integer arithmetic is checked and division is safe") {
  const ProblemSpec& p = problem("smallest");
  CHECK(val(eval_on(p, "(+ 2 3)")) == Value::integer(5));
  CHECK(val(eval_on(p, "(safe-div 7 2)")) == Value::integer(3));
  CHECK(val(eval_on(p, "(safe-div 7 0)")) == Value::integer(0));
  CHECK(val(eval_on(p, "(safe-mod -7 2)")) == Value::integer(1));
  CHECK(val(eval_on(p, "(safe-mod 7 0)")) == Value::integer(0));

  EvalResult overflow = eval_on(p, "(+ 9223372036854775807 1)");
  REQUIRE(is_error(overflow));
  CHECK(result_error(overflow).kind == RtErrorKind::Overflow);
}

TEST_CASE("sequence access errors are reported, not thrown") {
  const ProblemSpec& p = problem("negative-to-zero");
  EvalResult r = eval_on(p, "(first (rest [1]))");
  REQUIRE(is_error(r));
  CHECK(result_error(r).kind == RtErrorKind::IndexOutOfBounds);
  CHECK(val(eval_on(p, "(rest (rest [1]))")) == Value::sequence(std::vector<Value>{}));
  EvalResult nth = eval_on(p, "(nth [1 2 3] 5)");
  REQUIRE(is_error(nth));
  CHECK(result_error(nth).kind == RtErrorKind::IndexOutOfBounds);
}

TEST_CASE("evaluation is cut off by the step budget") {
  const ProblemSpec& p = problem("count-odds");
  EvalResult r = eval_on(p, "(count (range 99999))", {}, 50);
  REQUIRE(is_error(r));
  CHECK(result_error(r).kind == RtErrorKind::Timeout);
}

TEST_CASE("closures capture locals and apply like builtins") {
  const ProblemSpec& p = problem("negative-to-zero");
  CHECK(val(eval_on(p, "((fn [^Int x] (+ x 1)) 41)")) == Value::integer(42));
  CHECK(val(eval_on(p, "(let [y [1 -2 3]] (map abs y))")) ==
        Value::sequence({Value::integer(1), Value::integer(2),
                         Value::integer(3)}));
  CHECK(val(eval_on(p, "(map (fn [^Int x] (* x x)) [1 2 3])")) ==
        Value::sequence({Value::integer(1), Value::integer(4),
                         Value::integer(9)}));
}

TEST_CASE("program arguments bind as free variables") {
  const ProblemSpec& p = problem("smallest");
  EvalResult r = eval_on(p, "(min input1 input2)",
                         {{"input1", Value::integer(9)},
                          {"input2", Value::integer(4)}});
  CHECK(val(r) == Value::integer(4));
  EvalResult unbound = eval_on(p, "(min input1 mystery)",
                               {{"input1", Value::integer(9)}});
  CHECK(is_error(unbound));
}

TEST_CASE("conditionals and folds evaluate eagerly but correctly") {
  const ProblemSpec& p = problem("count-odds");
  CHECK(val(eval_on(p, "(if (odd? 3) 1 0)")) == Value::integer(1));
  CHECK(val(eval_on(p, "(reduce + [1 2 3 4])")) == Value::integer(10));
  CHECK(val(eval_on(p, "(fold + 100 [1 2 3])")) == Value::integer(106));
  EvalResult r = eval_on(p, "(reduce + (rest [1]))");
  REQUIRE(is_error(r));
  CHECK(result_error(r).kind == RtErrorKind::IndexOutOfBounds);
}

TEST_CASE("string and char builtins cover the print problems") {
  const ProblemSpec& rswn = problem("replace-space-with-newline");
  CHECK(val(eval_on(rswn, "(replace-char \"a b c\" \\space \\newline)")) ==
        Value::string("a\nb\nc"));
  CHECK(val(eval_on(rswn, "(occurrences-of-char \"hello\" \\l)")) ==
        Value::integer(2));
  const ProblemSpec& csl = problem("compare-string-lengths");
  CHECK(val(eval_on(csl, "(length \"abc\")")) == Value::integer(3));
  const ProblemSpec& fli = problem("for-loop-index");
  CHECK(val(eval_on(fli, "(unlines [\"a\" \"b\"])")) ==
        Value::string("a\nb"));
  CHECK(val(eval_on(fli, "(str 7)")) == Value::string("7"));
}
