#include "test_util.hpp"

using namespace evolisp;
using namespace evolisp::testutil;

namespace {

ExprPtr golden_body() {
  // (let [a-1 (fn [^Int a-0] (max 0 a-0))] (map a-1 input))
  ExprPtr inner = app(var_ref("max"),
                      {lit(Value::integer(0), int_type()), local_ref("a-0")});
  ExprPtr fn = abs({{"a-0", int_type()}}, inner);
  ExprPtr body = app(var_ref("map"), {local_ref("a-1"), var_ref("input")});
  return let_expr("a-1", fn, body);
}

}  // namespace

TEST_CASE("ast size counts atoms") {
  CHECK(ast_size(lit(Value::integer(7), int_type())) == 1);
  CHECK(ast_size(var_ref("input")) == 1);

  // (max 0 x): three atoms, application adds nothing
  ExprPtr call =
      app(var_ref("max"), {lit(Value::integer(0), int_type()), local_ref("x")});
  CHECK(ast_size(call) == 3);

  // (fn [a-0] (max 0 a-0)): header 1 + param 1 + body 3
  ExprPtr fn = abs({{"a-0", int_type()}},
                   app(var_ref("max"), {lit(Value::integer(0), int_type()),
                                        local_ref("a-0")}));
  CHECK(ast_size(fn) == 5);

  // let adds 2 on top of def and body
  CHECK(ast_size(golden_body()) == 10);

  // (map (fn [a-0] (max 0 a-0)) input): the let-free minimal form
  ExprPtr direct = app(var_ref("map"), {fn, var_ref("input")});
  CHECK(ast_size(direct) == 7);
}

TEST_CASE("check_type derives the golden program's type") {
  TypeEnv env = map_max_env();
  env.bind("input", Scheme::mono(seq_of(int_type())));
  TypePtr t = check_type(golden_body(), env);
  CHECK(type_equal(t, seq_of(int_type())));
}

TEST_CASE("check_type rejects ill-typed trees") {
  TypeEnv env = map_max_env();
  CHECK_THROWS_AS(
      check_type(app(var_ref("max"), {lit(Value::boolean(true), boolean_type()),
                                      lit(Value::integer(1), int_type())}),
                 env),
      TypeError);
  CHECK_THROWS_AS(check_type(var_ref("ghost"), env), TypeError);
  // arity mismatch
  CHECK_THROWS_AS(
      check_type(app(var_ref("max"), {lit(Value::integer(1), int_type())}),
                 env),
      TypeError);
  // literal value must inhabit its annotated type
  CHECK_THROWS_AS(
      check_type(lit(Value::boolean(true), int_type()), env), TypeError);
}

TEST_CASE("render and parse round-trip the golden body") {
  ExprPtr body = golden_body();
  std::string text = render_expr(body);
  CHECK(text == kGoldenRendered);
  ExprPtr back = parse_expr(text);
  CHECK(expr_equal(body, back));
}

TEST_CASE("render_source wraps the body in a defn form") {
  TypedAst prog{golden_body(), seq_of(int_type())};
  std::string src = render_source(prog, "negatives-gone", {"input"});
  CHECK(src == "(defn negatives-gone [input] " + std::string(kGoldenRendered) +
                   ")");
  std::string name;
  std::vector<std::string> args;
  ExprPtr back = parse_defn(src, &name, &args);
  CHECK(name == "negatives-gone");
  CHECK(args == std::vector<std::string>{"input"});
  CHECK(expr_equal(back, prog.expr));
}

TEST_CASE("literal text survives rendering") {
  for (const char* text : {
           "(str \"a b\")",
           "(= 'x' '\\n')",
           "(count [1 2 3])",
           "(if true 1.5 -2.0)",
           "(first [\"quo\\\"te\" \"two\"])",
       }) {
    CAPTURE(text);
    CHECK(render_expr(parse_expr(text)) == text);
  }
}

TEST_CASE("parser distinguishes bound locals from free names") {
  ExprPtr e = parse_expr("(fn [^Int x] (+ x y))");
  const auto* f = as<AbsNode>(e);
  REQUIRE(f);
  const auto* call = as<AppNode>(f->body);
  REQUIRE(call);
  CHECK(as<LocalNode>(call->args[0]) != nullptr);  // x is fn-bound
  CHECK(as<VarNode>(call->args[1]) != nullptr);    // y is free
}

TEST_CASE("parser rejects malformed source") {
  CHECK_THROWS_AS(parse_expr("(+ 1"), SourceParseError);
  CHECK_THROWS_AS(parse_expr("[]"), SourceParseError);  // untypeable literal
  CHECK_THROWS_AS(parse_expr(""), SourceParseError);
  CHECK_THROWS_AS(parse_defn("(+ 1 2)"), SourceParseError);
}
