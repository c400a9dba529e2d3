#include "evolisp/evolution.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace evolisp {

void GAConfig::validate() const {
  if (population_size == 0)
    throw std::invalid_argument("population_size must be positive");
  if (umad_rate < 0.0 || umad_rate >= 1.0)
    throw std::invalid_argument("umad_rate must be in [0, 1)");
  if (genome_size_min == 0 || genome_size_min > genome_size_max)
    throw std::invalid_argument("genome size range is empty");
  if (n_train == 0) throw std::invalid_argument("n_train must be positive");
  if (penalty <= 0.0) throw std::invalid_argument("penalty must be positive");
  if (step_budget <= 0)
    throw std::invalid_argument("step_budget must be positive");
}

Individual evaluate_individual(const Genome& genome, const ProblemSpec& p,
                               std::span<const Case> cases,
                               const GAConfig& cfg) {
  Individual ind;
  ind.genome = genome;
  FreshNames fresh;
  ind.program = compile_genome(genome, p.signature, p.env, fresh);
  ind.errors.reserve(cases.size());
  if (!ind.program) {
    ind.errors.assign(cases.size(), cfg.penalty);
    ind.total_error = cfg.penalty * static_cast<double>(cases.size());
    return ind;
  }
  for (const Case& c : cases) {
    std::vector<std::pair<std::string, Value>> args;
    args.reserve(c.inputs.size());
    for (size_t i = 0; i < c.inputs.size(); ++i)
      args.emplace_back(p.signature.arg_names[i], c.inputs[i]);
    EvalResult result =
        evaluate(ind.program->expr, args, p.table, cfg.step_budget);
    ind.errors.push_back(case_error(p, c.expected, result, cfg.penalty));
    ind.total_error += ind.errors.back();
  }
  return ind;
}

size_t lexicase_select(const std::vector<Individual>& pop, Rng& rng) {
  const size_t n_cases = pop.front().errors.size();
  std::vector<size_t> order(n_cases);
  for (size_t i = 0; i < n_cases; ++i) order[i] = i;
  rng.shuffle(order);

  std::vector<size_t> survivors(pop.size());
  for (size_t i = 0; i < pop.size(); ++i) survivors[i] = i;
  std::vector<size_t> next;

  for (size_t c : order) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i : survivors) best = std::min(best, pop[i].errors[c]);
    next.clear();
    for (size_t i : survivors)
      if (pop[i].errors[c] == best) next.push_back(i);
    survivors.swap(next);
    if (survivors.size() == 1) return survivors.front();
  }
  return survivors[rng.index(survivors.size())];
}

Genome umad(const Genome& genome, double rate, const GeneticSource& source,
            Rng& rng) {
  Genome grown;
  grown.reserve(genome.size() + genome.size() / 8 + 4);
  for (const Gene& g : genome) {
    if (rng.bernoulli(rate)) {
      Gene fresh = random_gene(source, rng);
      if (rng.bernoulli(0.5)) {
        grown.push_back(std::move(fresh));
        grown.push_back(g);
      } else {
        grown.push_back(g);
        grown.push_back(std::move(fresh));
      }
    } else {
      grown.push_back(g);
    }
  }
  const double del = rate / (1.0 + rate);
  Genome out;
  out.reserve(grown.size());
  for (Gene& g : grown)
    if (!rng.bernoulli(del)) out.push_back(std::move(g));
  return out;
}

namespace {

GenerationStats collect_stats(const std::vector<Individual>& pop, size_t gen,
                              double best_so_far) {
  GenerationStats s;
  s.generation = gen;
  s.best_error = std::numeric_limits<double>::infinity();
  double err_sum = 0.0, len_sum = 0.0, size_sum = 0.0;
  size_t compiled = 0;
  for (const Individual& ind : pop) {
    s.best_error = std::min(s.best_error, ind.total_error);
    err_sum += ind.total_error;
    len_sum += static_cast<double>(ind.genome.size());
    if (ind.program) {
      ++compiled;
      size_sum += static_cast<double>(ast_size(*ind.program));
    }
    if (ind.perfect()) ++s.perfect_count;
  }
  s.best_so_far = std::min(best_so_far, s.best_error);
  s.mean_error = err_sum / static_cast<double>(pop.size());
  s.mean_genome_len = len_sum / static_cast<double>(pop.size());
  s.mean_program_size =
      compiled ? size_sum / static_cast<double>(compiled) : 0.0;
  s.compile_failures = pop.size() - compiled;
  return s;
}

// Within one generation the better individual has smaller total error, then
// smaller program. Across generations only strict improvement replaces the
// incumbent, so the earliest generation wins ties.
const Individual* generation_best(const std::vector<Individual>& pop) {
  const Individual* best = &pop.front();
  auto size_of = [](const Individual& ind) {
    return ind.program ? ast_size(*ind.program)
                       : std::numeric_limits<size_t>::max();
  };
  for (const Individual& ind : pop) {
    if (ind.total_error < best->total_error ||
        (ind.total_error == best->total_error && size_of(ind) < size_of(*best)))
      best = &ind;
  }
  return best;
}

}  // namespace

RunResult run_evolution(const ProblemSpec& p, const GAConfig& cfg,
                        uint64_t seed, const CaseSet* cases) {
  cfg.validate();
  RunResult result;
  result.problem = p.name;
  result.seed = seed;

  Rng master(seed);
  result.cases = cases ? *cases
                       : generate_cases(p, cfg.n_train, cfg.n_test,
                                        master.fork(1).next_u64());
  Rng init_rng = master.fork(2);
  Rng evo_rng = master.fork(3);
  std::span<const Case> train(result.cases.train);

  std::vector<Individual> pop;
  pop.reserve(cfg.population_size);
  for (size_t i = 0; i < cfg.population_size; ++i) {
    Genome g = random_genome(p.source, cfg.genome_size_min,
                             cfg.genome_size_max, init_rng);
    pop.push_back(evaluate_individual(g, p, train, cfg));
  }

  double best_so_far = std::numeric_limits<double>::infinity();
  auto absorb = [&](const std::vector<Individual>& gen_pop, size_t gen) {
    const Individual* gb = generation_best(gen_pop);
    if (gb->total_error < result.best.total_error || result.history.empty()) {
      result.best = *gb;
      result.best_generation = gen;
    }
    result.history.push_back(collect_stats(gen_pop, gen, best_so_far));
    best_so_far = result.history.back().best_so_far;
    result.generations = gen + 1;
    if (gb->perfect()) result.solved_train = true;
  };

  absorb(pop, 0);
  for (size_t gen = 1; gen <= cfg.max_generations && !result.solved_train;
       ++gen) {
    std::vector<Individual> children;
    children.reserve(cfg.population_size);
    for (size_t i = 0; i < cfg.population_size; ++i) {
      const Individual& parent = pop[lexicase_select(pop, evo_rng)];
      Genome child = umad(parent.genome, cfg.umad_rate, p.source, evo_rng);
      children.push_back(evaluate_individual(child, p, train, cfg));
    }
    pop.swap(children);
    absorb(pop, gen);
  }
  return result;
}

Individual simplify(const Individual& ind, const ProblemSpec& p,
                    std::span<const Case> cases, const GAConfig& cfg,
                    Rng& rng, SimplifyStats* stats) {
  Individual best = ind.errors.size() == cases.size()
                        ? ind
                        : evaluate_individual(ind.genome, p, cases, cfg);
  for (size_t step = 0; step < cfg.simplification_steps; ++step) {
    const size_t len = best.genome.size();
    if (len == 0) break;
    size_t k = std::min<size_t>(1 + rng.index(4), len);
    std::set<size_t> drop;
    while (drop.size() < k) drop.insert(rng.index(len));
    Genome candidate;
    candidate.reserve(len - k);
    for (size_t i = 0; i < len; ++i)
      if (!drop.count(i)) candidate.push_back(best.genome[i]);
    Individual cand = evaluate_individual(candidate, p, cases, cfg);
    if (cand.total_error <= best.total_error) {
      if (stats) {
        ++stats->accepted;
        if (cand.genome.size() > best.genome.size()) ++stats->length_increases;
      }
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace evolisp
