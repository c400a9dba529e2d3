#pragma once

#include <doctest.h>

#include "evolisp/harness.hpp"

// Shared fixtures for the unit tests.

namespace evolisp::testutil {

// Environment with a monomorphic binary max and a polymorphic map, plus a
// one-argument signature (input : Sequence[Int]) -> Sequence[Int].
inline TypeEnv map_max_env() {
  TypeEnv env;
  env.bind("max",
           Scheme::mono(fn_type({int_type(), int_type()}, int_type())));
  env.bind("map",
           parse_scheme("forall a b. ((a -> b), Sequence[a]) -> Sequence[b]"));
  return env;
}

inline Signature seq_int_signature() {
  Signature sig;
  sig.return_type = seq_of(int_type());
  sig.arg_names = {"input"};
  sig.arg_types = {seq_of(int_type())};
  return sig;
}

inline const char* kGoldenGenomeText =
    "OPEN Local(1) Lit(0:Int) Var(max) APP CLOSE ABS[Int] "
    "OPEN Var(input) Local(1) Var(map) APP CLOSE LET";

inline const char* kGoldenRendered =
    "(let [a-1 (fn [^Int a-0] (max 0 a-0))] (map a-1 input))";

inline std::optional<TypedAst> compile_text(const std::string& genome_text,
                                            const Signature& sig,
                                            const TypeEnv& env) {
  FreshNames fresh;
  return compile_genome(parse_genome(genome_text), sig, env, fresh);
}

}  // namespace evolisp::testutil
