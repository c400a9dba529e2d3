#include <cmath>

#include "test_util.hpp"

using namespace evolisp;

namespace {

Value ref(const char* name, std::vector<Value> in) {
  return problem(name).reference(in);
}

Value iv(int64_t x) { return Value::integer(x); }
Value sv(std::string x) { return Value::string(std::move(x)); }

Value iseq(std::vector<int64_t> xs) {
  std::vector<Value> out;
  for (int64_t x : xs) out.push_back(iv(x));
  return Value::sequence(std::move(out));
}

// total training error of a handwritten body on generated cases
double source_error(const char* problem_name, const std::string& body,
                    uint64_t seed = 11, size_t n = 40) {
  const ProblemSpec& p = problem(problem_name);
  ExprPtr e = parse_expr(body);
  check_type(e, env_with_args(p.env, p.signature));  // must be well typed
  CaseSet cases = generate_cases(p, n, 0, seed);
  double total = 0;
  for (const Case& c : cases.train) {
    std::vector<std::pair<std::string, Value>> args;
    for (size_t i = 0; i < c.inputs.size(); ++i)
      args.emplace_back(p.signature.arg_names[i], c.inputs[i]);
    total += case_error(p, c.expected, evaluate(e, args, p.table), 1e6);
  }
  return total;
}

}  // namespace

TEST_CASE("all problems construct with validated sources") {
  CHECK(problem_names().size() == 14);
  for (const auto& name : problem_names()) {
    const ProblemSpec& p = problem(name);
    CHECK(p.name == name);
    CHECK_FALSE(p.builtins.empty());
    CHECK_FALSE(p.edge_inputs.empty());
  }
  CHECK_THROWS_AS(problem("no-such-task"), EnvError);
}

TEST_CASE("reference semantics on pinned inputs") {
  CHECK(ref("smallest", {iv(3), iv(1), iv(2), iv(5)}) == iv(1));
  CHECK(ref("median", {iv(5), iv(9), iv(1)}) == iv(5));
  CHECK(ref("number-io", {iv(3), Value::real(1.25)}) == Value::real(4.25));
  CHECK(ref("mirror-image", {iseq({1, 2}), iseq({2, 1})}) ==
        Value::boolean(true));
  CHECK(ref("mirror-image", {iseq({1, 2}), iseq({1, 2})}) ==
        Value::boolean(false));
  CHECK(ref("vectors-summed", {iseq({1, 2}), iseq({10, 20})}) ==
        iseq({11, 22}));
  CHECK(ref("negative-to-zero", {iseq({-3, 0, 2, -1})}) == iseq({0, 0, 2, 0}));
  CHECK(ref("vector-average",
            {Value::sequence({Value::real(1.0), Value::real(2.0)})}) ==
        Value::real(1.5));
  CHECK(ref("compare-string-lengths", {sv("a"), sv("ab"), sv("abc")}) ==
        Value::boolean(true));
  CHECK(ref("compare-string-lengths", {sv("a"), sv("a"), sv("abc")}) ==
        Value::boolean(false));
  CHECK(ref("last-index-of-zero", {iseq({0, 1, 0, 2})}) == iv(2));
  CHECK(ref("replace-space-with-newline", {sv("a b c")}) == sv("a\nb\nc"));
  CHECK(ref("small-or-large", {iv(999)}) == sv("small"));
  CHECK(ref("small-or-large", {iv(1000)}) == sv(""));
  CHECK(ref("small-or-large", {iv(2000)}) == sv("large"));
  CHECK(ref("count-odds", {iseq({1, 2, 3, -5})}) == iv(3));
  CHECK(ref("digits", {iv(-53)}) == sv("3\n-5"));
  CHECK(ref("digits", {iv(7)}) == sv("7"));
  CHECK(ref("for-loop-index", {iv(0), iv(5), iv(1)}) == sv("0\n1\n2\n3\n4"));
  CHECK(ref("for-loop-index", {iv(-5), iv(5), iv(4)}) == sv("-5\n-1\n3"));
}

TEST_CASE("error metrics") {
  const ProblemSpec& smallest = problem("smallest");
  CHECK(smallest.error_fn(iv(3), iv(5)) == 2.0);

  CHECK(levenshtein("kitten", "sitting") == 3.0);
  CHECK(levenshtein("", "abc") == 3.0);
  const ProblemSpec& sol = problem("small-or-large");
  CHECK(sol.error_fn(sv("small"), sv("large")) == 5.0);
  CHECK(sol.error_fn(sv("small"), sv("")) == 5.0);
  CHECK(sol.error_fn(sv("large"), sv("large")) == 0.0);

  // sequence error: edit distance plus length gap
  const ProblemSpec& nz = problem("negative-to-zero");
  CHECK(nz.error_fn(iseq({1, 2, 3}), iseq({1, 2, 3})) == 0.0);
  CHECK(nz.error_fn(iseq({1, 2, 3}), iseq({1, 9, 3})) == 1.0);
  CHECK(nz.error_fn(iseq({1, 2, 3}), iseq({1, 2})) == 2.0);  // 1 edit + 1 len

  // replace-space-with-newline folds in the non-whitespace count gap
  const ProblemSpec& rswn = problem("replace-space-with-newline");
  CHECK(rswn.error_fn(sv("a\nb"), sv("a\nb")) == 0.0);
  CHECK(rswn.error_fn(sv("a\nb"), sv("a b")) == 1.0);   // same letters
  CHECK(rswn.error_fn(sv("ab"), sv("a")) == 2.0);       // 1 edit + 1 count

  // double comparisons tolerate 1e-4
  const ProblemSpec& nio = problem("number-io");
  CHECK(nio.error_fn(Value::real(1.0), Value::real(1.00005)) == 0.0);
  CHECK(nio.error_fn(Value::real(1.0), Value::real(1.5)) == 0.5);
}

TEST_CASE("case errors clamp runtime failures and wild values") {
  const ProblemSpec& p = problem("number-io");
  const double penalty = 1e6;
  EvalResult err = RuntimeError{RtErrorKind::DivideByZero, ""};
  CHECK(case_error(p, Value::real(1.0), err, penalty) == penalty);
  EvalResult nan = Value::real(std::nan(""));
  CHECK(case_error(p, Value::real(1.0), nan, penalty) == penalty);
  EvalResult huge = Value::real(1e300);
  CHECK(case_error(p, Value::real(0.0), huge, penalty) == penalty);
  EvalResult wrong_kind = Value::integer(1);
  CHECK(case_error(p, Value::real(1.0), wrong_kind, penalty) == penalty);
  EvalResult fine = Value::real(1.5);
  CHECK(case_error(p, Value::real(1.0), fine, penalty) == 0.5);
}

TEST_CASE("case generation is deterministic and edge cases lead") {
  const ProblemSpec& p = problem("mirror-image");
  CaseSet a = generate_cases(p, 30, 50, 99);
  CaseSet b = generate_cases(p, 30, 50, 99);
  REQUIRE(a.train.size() == 30);
  REQUIRE(a.test.size() == 50);
  for (size_t i = 0; i < 30; ++i) {
    CHECK(a.train[i].inputs == b.train[i].inputs);
    CHECK(a.train[i].expected == b.train[i].expected);
  }
  for (size_t i = 0; i < p.edge_inputs.size() && i < 30; ++i)
    CHECK(a.train[i].inputs == p.edge_inputs[i]);
  // expected values come from the reference
  for (const Case& c : a.train)
    CHECK(c.expected == p.reference(c.inputs));

  CaseSet other = generate_cases(p, 30, 50, 100);
  bool any_diff = false;
  for (size_t i = p.edge_inputs.size(); i < 30; ++i)
    any_diff = any_diff || !(a.train[i].inputs == other.train[i].inputs);
  CHECK(any_diff);

  // edge list longer than n_train is capped
  CaseSet capped = generate_cases(p, 3, 0, 99);
  CHECK(capped.train.size() == 3);
}

TEST_CASE("canonical solutions score zero training error") {
  CHECK(source_error("smallest",
                     "(min (min input1 input2) (min input3 input4))") == 0.0);
  CHECK(source_error("median",
                     "(max (min input1 input2) (min (max input1 input2) "
                     "input3))") == 0.0);
  CHECK(source_error("number-io", "(+ (float input1) input2)") == 0.0);
  CHECK(source_error("mirror-image", "(= input1 (reverse input2))") == 0.0);
  CHECK(source_error("vectors-summed", "(map2 + input1 input2)") == 0.0);
  CHECK(source_error("negative-to-zero",
                     "(map (fn [^Int x] (max 0 x)) input1)") == 0.0);
  CHECK(source_error("vector-average",
                     "(safe-div (reduce + input1) (float (count input1)))") ==
        0.0);
  CHECK(source_error("compare-string-lengths",
                     "(and (< (length input1) (length input2)) (< (length "
                     "input2) (length input3)))") == 0.0);
  CHECK(source_error("last-index-of-zero",
                     "(- (dec (count input1)) (index-of (reverse input1) "
                     "0))") == 0.0);
  CHECK(source_error("replace-space-with-newline",
                     "(replace-char input1 \\space \\newline)") == 0.0);
  CHECK(source_error("small-or-large",
                     "(if (< input1 1000) \"small\" (if (>= input1 2000) "
                     "\"large\" \"\"))") == 0.0);
  CHECK(source_error("count-odds", "(count (filter odd? input1))") == 0.0);
}
