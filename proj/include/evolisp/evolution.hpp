#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evolisp/compiler.hpp"
#include "evolisp/problems.hpp"
#include "evolisp/rng.hpp"

namespace evolisp {

struct GAConfig {
  size_t population_size = 1000;
  size_t max_generations = 300;
  double umad_rate = 0.1;
  size_t simplification_steps = 2000;
  size_t genome_size_min = 50;
  size_t genome_size_max = 250;
  size_t n_train = 100;
  size_t n_test = 300;
  double penalty = 1e6;
  int64_t step_budget = kDefaultStepBudget;

  void validate() const;  // throws std::invalid_argument
};

struct Individual {
  Genome genome;
  std::optional<TypedAst> program;
  std::vector<double> errors;
  double total_error = 0.0;

  bool perfect() const { return total_error == 0.0; }
};

struct GenerationStats {
  size_t generation = 0;
  double best_error = 0.0;   // best total error within this generation
  double best_so_far = 0.0;  // best total error over the run so far
  double mean_error = 0.0;
  size_t perfect_count = 0;
  double mean_genome_len = 0.0;
  double mean_program_size = 0.0;  // over individuals that compiled
  size_t compile_failures = 0;
};

struct RunResult {
  std::string problem;
  uint64_t seed = 0;
  CaseSet cases;
  Individual best;  // best of run, before simplification
  size_t best_generation = 0;
  size_t generations = 0;  // evaluated generations including generation 0
  bool solved_train = false;
  std::vector<GenerationStats> history;
};

// Compiles the genome and scores it on the cases. A genome with no program
// scores the penalty on every case, as does any case whose evaluation ends
// in a runtime error.
Individual evaluate_individual(const Genome& genome, const ProblemSpec& p,
                               std::span<const Case> cases,
                               const GAConfig& cfg);

// Classic lexicase over the error vectors: cases in random order discard
// every candidate not minimal on that case; ties at the end break uniformly.
size_t lexicase_select(const std::vector<Individual>& pop, Rng& rng);

// Uniform mutation by addition and deletion. First pass: each gene, with
// probability rate, gets a fresh random gene inserted before or after it
// (fair coin). Second pass: each gene of the result is deleted with
// probability rate / (1 + rate), which keeps expected length unchanged.
Genome umad(const Genome& genome, double rate, const GeneticSource& source,
            Rng& rng);

// Generational loop: random initial population (generation 0), then each
// generation is bred entirely from lexicase parents via umad. Stops early
// the first generation a train-perfect individual appears. max_generations
// counts breeding cycles after generation 0. When cases is null a case set
// is generated from the seed.
RunResult run_evolution(const ProblemSpec& p, const GAConfig& cfg,
                        uint64_t seed, const CaseSet* cases = nullptr);

struct SimplifyStats {
  size_t accepted = 0;
  size_t length_increases = 0;
};

// Hill climbing on the genome: each step deletes 1..4 random genes and
// keeps the shorter genome whenever total training error does not get
// worse.
Individual simplify(const Individual& ind, const ProblemSpec& p,
                    std::span<const Case> cases, const GAConfig& cfg,
                    Rng& rng, SimplifyStats* stats = nullptr);

}  // namespace evolisp
