#include "test_util.hpp"

using namespace evolisp;
using namespace evolisp::testutil;

TEST_CASE("golden genome compiles to the let/map/max program") {
  auto ast = compile_text(kGoldenGenomeText, seq_int_signature(),
                          map_max_env());
  REQUIRE(ast);
  CHECK(type_equal(ast->type, seq_of(int_type())));
  CHECK(render_expr(ast->expr) == kGoldenRendered);
  // independent derivation agrees
  TypeEnv env = env_with_args(map_max_env(), seq_int_signature());
  CHECK(type_equal(check_type(*ast, env), seq_of(int_type())));
}

TEST_CASE("application searches the stack top-down per argument") {
  // stack bottom-to-top: Int literal, then input (Sequence[Int]);
  // map wants (a -> b) and Sequence[a]: incomplete without a function.
  Signature sig = seq_int_signature();
  TypeEnv env = map_max_env();
  auto noop = compile_text("Lit(3:Int) Var(input) Var(map) APP", sig, env);
  // map found no first argument, so APP was a no-op and select_output
  // falls back to the topmost Sequence[Int]: input itself.
  REQUIRE(noop);
  CHECK(render_expr(noop->expr) == "input");

  // max is binary so it can never feed map's unary slot; a unary function
  // lower in the stack is found by scanning past the non-matching top
  env.bind("neg", Scheme::mono(fn_type({int_type()}, int_type())));
  auto ok = compile_text("Var(neg) Var(input) Var(map) APP", sig, env);
  REQUIRE(ok);
  CHECK(render_expr(ok->expr) == "(map neg input)");
  CHECK(type_equal(ok->type, seq_of(int_type())));

  auto still_noop = compile_text("Var(input) Var(max) Var(map) APP", sig, env);
  REQUIRE(still_noop);
  CHECK(render_expr(still_noop->expr) == "input");
}

TEST_CASE("argument search is greedy per argument, without backtracking") {
  TypeEnv env;
  env.bind("eq", parse_scheme("forall a. (a, a) -> Boolean"));
  Signature sig;
  sig.return_type = boolean_type();

  // eq wants (a, a). The top String claims a, the Ints below cannot follow,
  // and the search never backs out of the first pick: APP is a no-op and
  // nothing Boolean remains for output selection.
  CHECK_FALSE(compile_text(
      "Lit(1:Int) Lit(2:Int) Lit(\"s\":String) Var(eq) APP", sig, env));

  // with agreeing types on top the same search completes
  auto ok = compile_text(
      "Lit(\"s\":String) Lit(1:Int) Lit(2:Int) Var(eq) APP", sig, env);
  REQUIRE(ok);
  CHECK(render_expr(ok->expr) == "(eq 2 1)");
  CHECK(type_equal(ok->type, boolean_type()));
}

TEST_CASE("local genes resolve modulo the locals in scope") {
  Signature sig;
  sig.return_type = int_type();
  sig.arg_names = {"input1", "input2"};
  sig.arg_types = {int_type(), int_type()};
  TypeEnv env;
  auto ast = compile_text("Local(3)", sig, env);
  REQUIRE(ast);
  CHECK(render_expr(ast->expr) == "input2");  // 3 mod 2 = 1
  auto ast0 = compile_text("Local(4)", sig, env);
  REQUIRE(ast0);
  CHECK(render_expr(ast0->expr) == "input1");
}

TEST_CASE("unbound variable genes are no-ops") {
  Signature sig;
  sig.return_type = int_type();
  TypeEnv env;
  CHECK_FALSE(compile_text("Var(ghost)", sig, env));
  auto ast = compile_text("Lit(5:Int) Var(ghost)", sig, env);
  REQUIRE(ast);
  CHECK(render_expr(ast->expr) == "5");
}

TEST_CASE("abstraction mints parameters and consumes failing chunks") {
  TypeEnv env = map_max_env();
  Signature sig;
  sig.return_type = fn_type({int_type()}, int_type());

  // first chunk cannot compile (empty), second one can
  auto ast = compile_text("OPEN Local(0) CLOSE OPEN CLOSE ABS[Int]", sig, env);
  REQUIRE(ast);
  CHECK(render_expr(ast->expr) == "(fn [^Int a-0] a-0)");
  CHECK(type_equal(ast->type, fn_type({int_type()}, int_type())));

  // no chunk compiles: ABS is a no-op
  CHECK_FALSE(compile_text("OPEN CLOSE ABS[Int]", sig, env));
}

TEST_CASE("let keeps the definition until a body chunk compiles") {
  TypeEnv env = map_max_env();
  Signature sig = seq_int_signature();

  // body chunk refers to the binding via Local; locals are [input, a-0... ]
  auto ast = compile_text("Lit(9:Int) OPEN Local(1) CLOSE LET", sig, env);
  // let bound a-0 to 9, body is a-0 itself, type Int; output needs
  // Sequence[Int], so selection fails even though the let compiled.
  CHECK_FALSE(ast);

  Signature int_sig;
  int_sig.return_type = int_type();
  int_sig.arg_names = {"input"};
  int_sig.arg_types = {seq_of(int_type())};
  auto ok = compile_text("Lit(9:Int) OPEN Local(1) CLOSE LET", int_sig, env);
  REQUIRE(ok);
  CHECK(render_expr(ok->expr) == "(let [a-0 9] a-0)");

  // no ast beneath: LET is a no-op
  CHECK_FALSE(compile_text("OPEN Local(0) CLOSE LET", int_sig, map_max_env()));
}

TEST_CASE("select_output prefers the topmost unifiable tree") {
  std::vector<TypedAst> stack;
  stack.push_back({lit(Value::integer(1), int_type()), int_type()});
  stack.push_back({lit(Value::string("s"), string_type()), string_type()});
  auto top = select_output(stack, string_type());
  REQUIRE(top);
  CHECK(type_equal(top->type, string_type()));
  auto below = select_output(stack, int_type());
  REQUIRE(below);
  CHECK(type_equal(below->type, int_type()));
  CHECK_FALSE(select_output(stack, boolean_type()));
}

TEST_CASE("incomplete application leaves the stack untouched") {
  TypeEnv env = map_max_env();
  Signature sig;
  sig.return_type = int_type();
  // max wants two Ints, only one available
  auto ast = compile_text("Lit(3:Int) Var(max) APP", sig, env);
  REQUIRE(ast);
  CHECK(render_expr(ast->expr) == "3");
}

TEST_CASE("polymorphic return types specialize per application") {
  TypeEnv env;
  env.bind("single", parse_scheme("forall a. a -> Sequence[a]"));
  Signature sig;
  sig.return_type = seq_of(seq_of(int_type()));
  sig.arg_names = {"input"};
  sig.arg_types = {int_type()};
  auto ast = compile_text("Var(input) Var(single) APP Var(single) APP",
                          sig, env);
  REQUIRE(ast);
  CHECK(render_expr(ast->expr) == "(single (single input))");
  CHECK(type_equal(ast->type, seq_of(seq_of(int_type()))));
}

TEST_CASE("observer sees every pushed tree with its environment") {
  size_t pushes = 0;
  bool all_check = true;
  PushObserver obs = [&](const TypedAst& ast, const TypeEnv& env) {
    ++pushes;
    try {
      TypePtr derived = check_type(ast.expr, env);
      all_check = all_check && unify(derived, ast.type).has_value();
    } catch (const TypeError&) {
      all_check = false;
    }
  };
  FreshNames fresh;
  auto ast = compile_genome(parse_genome(kGoldenGenomeText),
                            seq_int_signature(), map_max_env(), fresh, &obs);
  REQUIRE(ast);
  CHECK(pushes >= 7);  // every literal, var, local, app, abs, let push
  CHECK(all_check);
}
