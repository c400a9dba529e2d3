#include "evolisp/problems.hpp"

#include <algorithm>
#include <cmath>

namespace evolisp {

double levenshtein(const std::string& a, const std::string& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<size_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]);
}

double levenshtein_values(const std::vector<Value>& a,
                          const std::vector<Value>& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<size_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]);
}

namespace {

Value iv(int64_t x) { return Value::integer(x); }
Value dv(double x) { return Value::real(x); }
Value bv(bool x) { return Value::boolean(x); }
Value cv(char x) { return Value::character(x); }
Value sv(std::string x) { return Value::string(std::move(x)); }

Value iseq(std::vector<int64_t> xs) {
  std::vector<Value> out;
  out.reserve(xs.size());
  for (int64_t x : xs) out.push_back(iv(x));
  return Value::sequence(std::move(out));
}

Value dseq(std::vector<double> xs) {
  std::vector<Value> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(dv(x));
  return Value::sequence(std::move(out));
}

// ---- error metrics ----------------------------------------------------

double abs_int_error(const Value& e, const Value& a) {
  return std::fabs(static_cast<double>(e.as_int()) -
                   static_cast<double>(a.as_int()));
}

double abs_double_error(const Value& e, const Value& a) {
  double d = std::fabs(e.as_double() - a.as_double());
  return d <= 1e-4 ? 0.0 : d;
}

double bool_error(const Value& e, const Value& a) {
  return e.as_bool() == a.as_bool() ? 0.0 : 1.0;
}

double string_error(const Value& e, const Value& a) {
  return levenshtein(e.as_string(), a.as_string());
}

double seq_error(const Value& e, const Value& a) {
  const auto& xs = e.as_seq();
  const auto& ys = a.as_seq();
  double len_gap = std::fabs(static_cast<double>(xs.size()) -
                             static_cast<double>(ys.size()));
  return levenshtein_values(xs, ys) + len_gap;
}

size_t non_whitespace(const std::string& s) {
  size_t n = 0;
  for (char c : s)
    if (c != ' ' && c != '\n' && c != '\t') ++n;
  return n;
}

// Edit distance of the text plus how far off the non-whitespace count is,
// the printed-output pair of this task folded into one number.
double rswn_error(const Value& e, const Value& a) {
  double lev = levenshtein(e.as_string(), a.as_string());
  double gap = std::fabs(static_cast<double>(non_whitespace(e.as_string())) -
                         static_cast<double>(non_whitespace(a.as_string())));
  return lev + gap;
}

// ---- genetic source ingredients ----------------------------------------

ErcGenerator int_erc(int64_t lo, int64_t hi) {
  return {"int[" + std::to_string(lo) + "," + std::to_string(hi) + "]",
          [lo, hi](Rng& rng) -> std::pair<Value, TypePtr> {
            return {iv(rng.uniform_int(lo, hi)), int_type()};
          }};
}

ErcGenerator double_erc(double lo, double hi) {
  return {"double", [lo, hi](Rng& rng) -> std::pair<Value, TypePtr> {
            return {dv(rng.uniform_real(lo, hi)), double_type()};
          }};
}

constexpr const char* kVisibleChars =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    "!?.,;:-_+*/<>=";

ErcGenerator char_erc(bool with_space) {
  return {"char", [with_space](Rng& rng) -> std::pair<Value, TypePtr> {
            std::string pool = kVisibleChars;
            if (with_space) pool += ' ';
            return {cv(pool[rng.index(pool.size())]), char_type()};
          }};
}

ErcGenerator string_erc(size_t max_len, bool with_space) {
  return {"string", [max_len, with_space](Rng& rng)
                        -> std::pair<Value, TypePtr> {
            std::string pool = kVisibleChars;
            if (with_space) pool += "    ";  // weighted toward spaces
            size_t len = rng.index(max_len + 1);
            std::string s;
            for (size_t i = 0; i < len; ++i)
              s += pool[rng.index(pool.size())];
            return {sv(std::move(s)), string_type()};
          }};
}

std::string random_word(Rng& rng, size_t max_len, bool with_space) {
  std::string pool = kVisibleChars;
  if (with_space) pool += "      ";
  size_t len = rng.index(max_len + 1);
  std::string s;
  for (size_t i = 0; i < len; ++i) s += pool[rng.index(pool.size())];
  return s;
}

std::vector<int64_t> random_ints(Rng& rng, size_t len, int64_t lo,
                                 int64_t hi) {
  std::vector<int64_t> xs(len);
  for (auto& x : xs) x = rng.uniform_int(lo, hi);
  return xs;
}

// ---- assembly -----------------------------------------------------------

struct ProblemDef {
  std::string name;
  TypePtr ret;
  std::vector<TypePtr> arg_types;
  std::vector<TypePtr> relevant;
  std::vector<std::pair<Value, TypePtr>> literals;
  std::vector<ErcGenerator> ercs;
  std::vector<std::vector<Value>> edges;
  std::function<std::vector<Value>(Rng&)> sample;
  std::function<Value(const std::vector<Value>&)> reference;
  std::function<double(const Value&, const Value&)> error;
};

ProblemSpec assemble(ProblemDef def) {
  ProblemSpec p;
  p.name = std::move(def.name);
  p.signature.return_type = def.ret;
  p.signature.arg_types = def.arg_types;
  for (size_t i = 0; i < def.arg_types.size(); ++i)
    p.signature.arg_names.push_back("input" + std::to_string(i + 1));
  p.builtins = builtins_for(def.relevant);
  p.env = env_of(p.builtins);
  p.table = table_of(p.builtins);

  GeneticSource src;
  for (size_t i = 0; i < def.arg_types.size(); ++i)
    src.vars.emplace_back(p.signature.arg_names[i],
                          Scheme::mono(def.arg_types[i]));
  for (const Builtin& b : p.builtins) src.vars.emplace_back(b.name, b.scheme);
  src.literals = std::move(def.literals);
  src.erc_generators = std::move(def.ercs);
  for (const TypePtr& t : def.relevant)
    if (t->kind == TypeKind::Ground && t->name != "Boolean")
      src.abs_arities.push_back({t});
  if (src.abs_arities.empty()) src.abs_arities.push_back({int_type()});
  p.source = std::move(src);
  p.source.validate(env_with_args(p.env, p.signature));

  p.edge_inputs = std::move(def.edges);
  p.sample_inputs = std::move(def.sample);
  p.reference = std::move(def.reference);
  p.error_fn = std::move(def.error);
  return p;
}

std::vector<ProblemSpec> build_all() {
  std::vector<ProblemSpec> all;
  const TypePtr I = int_type();
  const TypePtr D = double_type();
  const TypePtr B = boolean_type();
  const TypePtr S = string_type();
  const TypePtr C = char_type();
  const TypePtr SI = seq_of(int_type());
  const TypePtr SD = seq_of(double_type());

  {
    ProblemDef d;
    d.name = "smallest";
    d.ret = I;
    d.arg_types = {I, I, I, I};
    d.relevant = {I, B};
    d.literals = {{iv(0), I}};
    d.ercs = {int_erc(-100, 100)};
    d.edges = {{iv(0), iv(0), iv(0), iv(0)},
               {iv(-100), iv(-100), iv(-100), iv(-100)},
               {iv(100), iv(100), iv(100), iv(100)},
               {iv(-100), iv(100), iv(100), iv(100)},
               {iv(100), iv(-100), iv(100), iv(100)},
               {iv(100), iv(100), iv(-100), iv(100)},
               {iv(100), iv(100), iv(100), iv(-100)},
               {iv(1), iv(2), iv(3), iv(4)},
               {iv(4), iv(3), iv(2), iv(1)},
               {iv(-1), iv(0), iv(1), iv(0)}};
    d.sample = [](Rng& rng) {
      std::vector<Value> in;
      for (int i = 0; i < 4; ++i) in.push_back(iv(rng.uniform_int(-100, 100)));
      return in;
    };
    d.reference = [](const std::vector<Value>& in) {
      int64_t m = in[0].as_int();
      for (size_t i = 1; i < 4; ++i) m = std::min(m, in[i].as_int());
      return iv(m);
    };
    d.error = abs_int_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "median";
    d.ret = I;
    d.arg_types = {I, I, I};
    d.relevant = {I, B};
    d.literals = {{iv(0), I}};
    d.ercs = {int_erc(-100, 100)};
    d.edges = {{iv(0), iv(0), iv(0)},    {iv(1), iv(2), iv(3)},
               {iv(3), iv(2), iv(1)},    {iv(2), iv(3), iv(1)},
               {iv(-100), iv(0), iv(100)}, {iv(100), iv(-100), iv(0)},
               {iv(5), iv(5), iv(-5)},   {iv(-5), iv(5), iv(5)},
               {iv(5), iv(-5), iv(5)},   {iv(-100), iv(-100), iv(100)}};
    d.sample = [](Rng& rng) {
      std::vector<Value> in;
      for (int i = 0; i < 3; ++i) in.push_back(iv(rng.uniform_int(-100, 100)));
      return in;
    };
    d.reference = [](const std::vector<Value>& in) {
      int64_t a = in[0].as_int(), b = in[1].as_int(), c = in[2].as_int();
      return iv(std::max(std::min(a, b), std::min(std::max(a, b), c)));
    };
    d.error = abs_int_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "number-io";
    d.ret = D;
    d.arg_types = {I, D};
    d.relevant = {I, D};
    d.literals = {{iv(0), I}, {dv(0.0), D}};
    d.ercs = {int_erc(-100, 100), double_erc(-100.0, 100.0)};
    d.edges = {{iv(0), dv(0.0)},       {iv(100), dv(100.0)},
               {iv(-100), dv(-100.0)}, {iv(0), dv(-55.25)},
               {iv(77), dv(0.0)},      {iv(-1), dv(1.0)},
               {iv(1), dv(-1.0)},      {iv(100), dv(-100.0)}};
    d.sample = [](Rng& rng) {
      return std::vector<Value>{iv(rng.uniform_int(-100, 100)),
                                dv(rng.uniform_real(-100.0, 100.0))};
    };
    d.reference = [](const std::vector<Value>& in) {
      return dv(static_cast<double>(in[0].as_int()) + in[1].as_double());
    };
    d.error = abs_double_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "mirror-image";
    d.ret = B;
    d.arg_types = {SI, SI};
    d.relevant = {I, B, SI};
    d.literals = {{bv(true), B}, {bv(false), B}};
    d.ercs = {int_erc(-1000, 1000)};
    d.edges = {{iseq({}), iseq({})},
               {iseq({1}), iseq({1})},
               {iseq({1}), iseq({0})},
               {iseq({1, 2}), iseq({2, 1})},
               {iseq({1, 2}), iseq({1, 2})},
               {iseq({7, 7, 7}), iseq({7, 7, 7})},
               {iseq({1, 2, 3}), iseq({3, 2, 1})},
               {iseq({1, 2, 3}), iseq({3, 2, 2})},
               {iseq({0, 0, 0, 0}), iseq({0, 0, 0, 0})},
               {iseq({1, 0, 0}), iseq({0, 0, 1})}};
    d.sample = [](Rng& rng) {
      size_t len = rng.index(51);
      std::vector<int64_t> a = random_ints(rng, len, -1000, 1000);
      std::vector<int64_t> b;
      double mode = rng.next_double();
      if (mode < 0.35) {
        b.assign(a.rbegin(), a.rend());
      } else if (mode < 0.5 && len > 0) {
        b.assign(a.rbegin(), a.rend());
        b[rng.index(len)] = rng.uniform_int(-1000, 1000);
      } else {
        b = random_ints(rng, len, -1000, 1000);
      }
      return std::vector<Value>{iseq(std::move(a)), iseq(std::move(b))};
    };
    d.reference = [](const std::vector<Value>& in) {
      const auto& xs = in[0].as_seq();
      const auto& ys = in[1].as_seq();
      if (xs.size() != ys.size()) return bv(false);
      for (size_t i = 0; i < xs.size(); ++i)
        if (xs[i] != ys[ys.size() - 1 - i]) return bv(false);
      return bv(true);
    };
    d.error = bool_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "vectors-summed";
    d.ret = SI;
    d.arg_types = {SI, SI};
    d.relevant = {I, SI};
    d.literals = {{iv(0), I}};
    d.ercs = {int_erc(-1000, 1000)};
    d.edges = {{iseq({}), iseq({})},
               {iseq({0}), iseq({0})},
               {iseq({1000}), iseq({1000})},
               {iseq({-1000}), iseq({-1000})},
               {iseq({1, 2, 3}), iseq({3, 2, 1})},
               {iseq({0, 0}), iseq({-1, 1})},
               {iseq({-1000, 1000}), iseq({1000, -1000})}};
    d.sample = [](Rng& rng) {
      size_t len = rng.index(51);
      return std::vector<Value>{iseq(random_ints(rng, len, -1000, 1000)),
                                iseq(random_ints(rng, len, -1000, 1000))};
    };
    d.reference = [](const std::vector<Value>& in) {
      const auto& xs = in[0].as_seq();
      const auto& ys = in[1].as_seq();
      std::vector<Value> out;
      size_t n = std::min(xs.size(), ys.size());
      for (size_t i = 0; i < n; ++i)
        out.push_back(iv(xs[i].as_int() + ys[i].as_int()));
      return Value::sequence(std::move(out));
    };
    d.error = seq_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "negative-to-zero";
    d.ret = SI;
    d.arg_types = {SI};
    d.relevant = {I, SI};
    d.literals = {{iv(0), I}};
    d.ercs = {int_erc(-1000, 1000)};
    d.edges = {{iseq({})},
               {iseq({0})},
               {iseq({-1})},
               {iseq({1})},
               {iseq({-1000})},
               {iseq({-5, -4, -3, -2, -1})},
               {iseq({1, 2, 3, 4, 5})},
               {iseq({-1, 1, -2, 2, 0})},
               {iseq({0, 0, 0})}};
    d.sample = [](Rng& rng) {
      size_t len = rng.index(51);
      return std::vector<Value>{iseq(random_ints(rng, len, -1000, 1000))};
    };
    d.reference = [](const std::vector<Value>& in) {
      std::vector<Value> out;
      for (const auto& x : in[0].as_seq())
        out.push_back(iv(std::max<int64_t>(0, x.as_int())));
      return Value::sequence(std::move(out));
    };
    d.error = seq_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "vector-average";
    d.ret = D;
    d.arg_types = {SD};
    d.relevant = {I, D, SD};
    d.literals = {{dv(0.0), D}};
    d.ercs = {double_erc(-1000.0, 1000.0)};
    d.edges = {{dseq({0.0})},
               {dseq({100.5})},
               {dseq({-100.5})},
               {dseq({2.0, 3.0})},
               {dseq({0.0, 0.0, 0.0})},
               {dseq({-1000.0, 1000.0})},
               {dseq({1.5, 2.5, 3.5, 4.5})}};
    d.sample = [](Rng& rng) {
      size_t len = 1 + rng.index(50);
      std::vector<Value> xs;
      for (size_t i = 0; i < len; ++i)
        xs.push_back(dv(rng.uniform_real(-1000.0, 1000.0)));
      return std::vector<Value>{Value::sequence(std::move(xs))};
    };
    // Same association order as a left fold with + so results match an
    // evolved (safe-div (reduce + v) (float (count v))) bit for bit.
    d.reference = [](const std::vector<Value>& in) {
      const auto& xs = in[0].as_seq();
      double acc = xs[0].as_double();
      for (size_t i = 1; i < xs.size(); ++i) acc += xs[i].as_double();
      return dv(acc / static_cast<double>(xs.size()));
    };
    d.error = abs_double_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "compare-string-lengths";
    d.ret = B;
    d.arg_types = {S, S, S};
    d.relevant = {I, B, S};
    d.literals = {{bv(true), B}, {bv(false), B}};
    d.ercs = {string_erc(10, false), int_erc(-100, 100)};
    d.edges = {{sv(""), sv(""), sv("")},
               {sv(""), sv("a"), sv("ab")},
               {sv("ab"), sv("a"), sv("")},
               {sv("a"), sv("a"), sv("a")},
               {sv(""), sv(""), sv("a")},
               {sv("a"), sv(""), sv("ab")},
               {sv("a"), sv("ab"), sv("abc")},
               {sv("abc"), sv("ab"), sv("abcd")}};
    d.sample = [](Rng& rng) {
      double mode = rng.next_double();
      if (mode < 0.25) {
        size_t l1 = rng.index(20);
        size_t l2 = l1 + 1 + rng.index(10);
        size_t l3 = l2 + 1 + rng.index(10);
        auto word = [&rng](size_t len) {
          std::string s;
          for (size_t i = 0; i < len; ++i)
            s += kVisibleChars[rng.index(62)];
          return s;
        };
        return std::vector<Value>{sv(word(l1)), sv(word(l2)), sv(word(l3))};
      }
      return std::vector<Value>{sv(random_word(rng, 49, false)),
                                sv(random_word(rng, 49, false)),
                                sv(random_word(rng, 49, false))};
    };
    d.reference = [](const std::vector<Value>& in) {
      size_t l1 = in[0].as_string().size();
      size_t l2 = in[1].as_string().size();
      size_t l3 = in[2].as_string().size();
      return bv(l1 < l2 && l2 < l3);
    };
    d.error = bool_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "last-index-of-zero";
    d.ret = I;
    d.arg_types = {SI};
    d.relevant = {I, SI};
    d.literals = {{iv(0), I}};
    d.ercs = {int_erc(-50, 50)};
    d.edges = {{iseq({0, 1})},       {iseq({1, 0})},    {iseq({0, 0})},
               {iseq({0, 5, 0})},    {iseq({7, 0})},    {iseq({0, 1, 2, 3})},
               {iseq({1, 2, 3, 0})}, {iseq({0, 0, 0})}, {iseq({5, 0, 5, 0, 5})}};
    d.sample = [](Rng& rng) {
      size_t len = 2 + rng.index(49);
      std::vector<int64_t> xs = random_ints(rng, len, -50, 50);
      xs[rng.index(len)] = 0;
      return std::vector<Value>{iseq(std::move(xs))};
    };
    d.reference = [](const std::vector<Value>& in) {
      const auto& xs = in[0].as_seq();
      int64_t last = -1;
      for (size_t i = 0; i < xs.size(); ++i)
        if (xs[i].as_int() == 0) last = static_cast<int64_t>(i);
      return iv(last);
    };
    d.error = abs_int_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "replace-space-with-newline";
    d.ret = S;
    d.arg_types = {S};
    d.relevant = {I, B, S, C};
    d.literals = {{cv(' '), C}, {cv('\n'), C}};
    d.ercs = {char_erc(true), string_erc(20, true)};
    d.edges = {{sv("")},      {sv(" ")},     {sv("a")},  {sv("a b c")},
               {sv("  ")},    {sv("a ")},    {sv(" a")}, {sv("hello world")},
               {sv("x y z")}, {sv("nospace")}};
    d.sample = [](Rng& rng) {
      return std::vector<Value>{sv(random_word(rng, 20, true))};
    };
    d.reference = [](const std::vector<Value>& in) {
      std::string s = in[0].as_string();
      for (char& c : s)
        if (c == ' ') c = '\n';
      return sv(std::move(s));
    };
    d.error = rswn_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "small-or-large";
    d.ret = S;
    d.arg_types = {I};
    d.relevant = {I, B, S};
    d.literals = {{sv("small"), S},
                  {sv("large"), S},
                  {sv(""), S},
                  {iv(1000), I},
                  {iv(2000), I}};
    d.ercs = {int_erc(-10000, 10000)};
    d.edges = {{iv(999)},  {iv(1000)}, {iv(1001)},   {iv(1999)},
               {iv(2000)}, {iv(2001)}, {iv(0)},      {iv(-10000)},
               {iv(10000)}, {iv(1500)}};
    d.sample = [](Rng& rng) {
      if (rng.bernoulli(0.2))
        return std::vector<Value>{
            iv(rng.bernoulli(0.5) ? rng.uniform_int(995, 1005)
                                  : rng.uniform_int(1995, 2005))};
      return std::vector<Value>{iv(rng.uniform_int(-10000, 10000))};
    };
    d.reference = [](const std::vector<Value>& in) {
      int64_t n = in[0].as_int();
      if (n < 1000) return sv("small");
      if (n >= 2000) return sv("large");
      return sv("");
    };
    d.error = string_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "count-odds";
    d.ret = I;
    d.arg_types = {SI};
    d.relevant = {I, B, SI};
    d.literals = {{iv(0), I}, {iv(1), I}, {iv(2), I}};
    d.ercs = {int_erc(-1000, 1000)};
    d.edges = {{iseq({})},
               {iseq({0})},
               {iseq({1})},
               {iseq({-1})},
               {iseq({2, 4, 6, 8})},
               {iseq({1, 3, 5, 7})},
               {iseq({-3, -2, -1, 0, 1, 2, 3})},
               {iseq({1000, -1000})}};
    d.sample = [](Rng& rng) {
      size_t len = rng.index(51);
      return std::vector<Value>{iseq(random_ints(rng, len, -1000, 1000))};
    };
    d.reference = [](const std::vector<Value>& in) {
      int64_t n = 0;
      for (const auto& x : in[0].as_seq())
        if (x.as_int() % 2 != 0) ++n;
      return iv(n);
    };
    d.error = abs_int_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "digits";
    d.ret = S;
    d.arg_types = {I};
    d.relevant = {I, B, S, C};
    d.literals = {{iv(0), I}, {iv(10), I}, {cv('\n'), C}};
    d.ercs = {int_erc(-10, 10)};
    d.edges = {{iv(0)},  {iv(7)},   {iv(-7)},  {iv(10)},        {iv(-10)},
               {iv(99)}, {iv(-99)}, {iv(100)}, {iv(9999999999)}, {iv(-9999999999)}};
    d.sample = [](Rng& rng) {
      size_t digits = 1 + rng.index(10);
      int64_t lo = 1, hi = 9;
      for (size_t i = 1; i < digits; ++i) {
        lo *= 10;
        hi = hi * 10 + 9;
      }
      if (digits == 1) lo = 0;
      int64_t mag = rng.uniform_int(lo, hi);
      if (mag != 0 && rng.bernoulli(0.5)) mag = -mag;
      return std::vector<Value>{iv(mag)};
    };
    // Least significant digit first, one per line, the sign attached to the
    // most significant digit (the last line).
    d.reference = [](const std::vector<Value>& in) {
      int64_t n = in[0].as_int();
      bool neg = n < 0;
      std::string mag = std::to_string(neg ? -n : n);
      std::string out;
      for (size_t i = mag.size(); i-- > 0;) {
        if (i == 0 && neg) out += '-';
        out += mag[i];
        if (i > 0) out += '\n';
      }
      return sv(std::move(out));
    };
    d.error = string_error;
    all.push_back(assemble(std::move(d)));
  }

  {
    ProblemDef d;
    d.name = "for-loop-index";
    d.ret = S;
    d.arg_types = {I, I, I};
    d.relevant = {I, S, SI};
    d.literals = {{iv(0), I}, {iv(1), I}};
    d.ercs = {int_erc(-500, 500)};
    d.edges = {{iv(0), iv(1), iv(1)},
               {iv(0), iv(5), iv(1)},
               {iv(-5), iv(5), iv(2)},
               {iv(2), iv(3), iv(5)},
               {iv(-500), iv(-495), iv(1)},
               {iv(495), iv(500), iv(3)},
               {iv(0), iv(10), iv(10)},
               {iv(-3), iv(0), iv(1)}};
    d.sample = [](Rng& rng) {
      int64_t step = 1 + static_cast<int64_t>(rng.index(10));
      int64_t iters = 1 + static_cast<int64_t>(rng.index(20));
      int64_t start = rng.uniform_int(-500, 500);
      int64_t end = start + step * (iters - 1) + 1 +
                    static_cast<int64_t>(rng.index(static_cast<size_t>(step)));
      return std::vector<Value>{iv(start), iv(end), iv(step)};
    };
    d.reference = [](const std::vector<Value>& in) {
      int64_t start = in[0].as_int(), end = in[1].as_int(),
              step = in[2].as_int();
      std::string out;
      for (int64_t i = start; i < end; i += step) {
        if (!out.empty()) out += '\n';
        out += std::to_string(i);
      }
      return sv(std::move(out));
    };
    d.error = string_error;
    all.push_back(assemble(std::move(d)));
  }

  return all;
}

const std::vector<ProblemSpec>& registry() {
  static const std::vector<ProblemSpec> all = build_all();
  return all;
}

}  // namespace

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : registry()) out.push_back(p.name);
    return out;
  }();
  return names;
}

bool has_problem(const std::string& name) {
  for (const auto& p : registry())
    if (p.name == name) return true;
  return false;
}

const ProblemSpec& problem(const std::string& name) {
  for (const auto& p : registry())
    if (p.name == name) return p;
  throw EnvError("unknown problem: " + name);
}

CaseSet generate_cases(const ProblemSpec& p, size_t n_train, size_t n_test,
                       uint64_t seed) {
  Rng rng(seed);
  CaseSet cs;
  for (const auto& inputs : p.edge_inputs) {
    if (cs.train.size() >= n_train) break;
    cs.train.push_back({inputs, p.reference(inputs)});
  }
  while (cs.train.size() < n_train) {
    std::vector<Value> inputs = p.sample_inputs(rng);
    cs.train.push_back({inputs, p.reference(inputs)});
  }
  for (size_t i = 0; i < n_test; ++i) {
    std::vector<Value> inputs = p.sample_inputs(rng);
    cs.test.push_back({inputs, p.reference(inputs)});
  }
  return cs;
}

double case_error(const ProblemSpec& p, const Value& expected,
                  const EvalResult& result, double penalty) {
  if (is_error(result)) return penalty;
  double e;
  try {
    e = p.error_fn(expected, result_value(result));
  } catch (const RuntimeSignal&) {
    return penalty;  // value of the wrong kind for this metric
  }
  if (std::isnan(e) || e > penalty) return penalty;
  return e;
}

}  // namespace evolisp
