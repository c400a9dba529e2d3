#include "test_util.hpp"

using namespace evolisp;

namespace {

// canonical number-io solution as a genome
const char* kNumberIoGenome = "Local(0) Var(float) APP Local(1) Var(+) APP";

GAConfig tiny_config() {
  GAConfig cfg;
  cfg.population_size = 150;
  cfg.max_generations = 25;
  cfg.n_train = 25;
  cfg.n_test = 50;
  return cfg;
}

Individual mock(std::vector<double> errors) {
  Individual ind;
  ind.errors = std::move(errors);
  ind.total_error = 0;
  for (double e : ind.errors) ind.total_error += e;
  return ind;
}

}  // namespace

TEST_CASE("ga config validation") {
  GAConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.population_size = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = GAConfig{};
  cfg.umad_rate = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = GAConfig{};
  cfg.genome_size_min = 300;  // above max
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = GAConfig{};
  cfg.n_train = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("individuals are scored case by case") {
  const ProblemSpec& p = problem("number-io");
  GAConfig cfg = tiny_config();
  CaseSet cases = generate_cases(p, cfg.n_train, 0, 5);

  Individual good = evaluate_individual(parse_genome(kNumberIoGenome), p,
                                        cases.train, cfg);
  REQUIRE(good.program.has_value());
  CHECK(good.errors.size() == cases.train.size());
  CHECK(good.total_error == 0.0);
  CHECK(good.perfect());

  Individual none = evaluate_individual(parse_genome("APP"), p, cases.train,
                                        cfg);
  CHECK_FALSE(none.program.has_value());
  CHECK(none.total_error ==
        cfg.penalty * static_cast<double>(cases.train.size()));
}

TEST_CASE("lexicase filters by cases in random order") {
  std::vector<Individual> pop;
  pop.push_back(mock({0, 5}));  // A: wins when case 0 comes first
  pop.push_back(mock({5, 0}));  // B: wins when case 1 comes first
  pop.push_back(mock({1, 1}));  // C: never survives the first filter
  Rng rng(17);
  size_t counts[3] = {0, 0, 0};
  const size_t draws = 2000;
  for (size_t i = 0; i < draws; ++i) ++counts[lexicase_select(pop, rng)];
  CHECK(counts[2] == 0);
  CHECK(counts[0] + counts[1] == draws);
  CHECK(counts[0] > draws / 2 - draws / 12);
  CHECK(counts[0] < draws / 2 + draws / 12);
}

TEST_CASE("lexicase breaks full ties uniformly at random") {
  std::vector<Individual> pop;
  pop.push_back(mock({2, 2}));
  pop.push_back(mock({2, 2}));
  Rng rng(3);
  size_t first = 0;
  for (size_t i = 0; i < 400; ++i)
    if (lexicase_select(pop, rng) == 0) ++first;
  CHECK(first > 120);
  CHECK(first < 280);
}

TEST_CASE("umad preserves expected length and is seed-deterministic") {
  const ProblemSpec& p = problem("smallest");
  Rng init(1);
  Genome base = random_genome(p.source, 100, 100, init);
  REQUIRE(base.size() == 100);

  Rng a(9), b(9);
  Genome child_a = umad(base, 0.1, p.source, a);
  Genome child_b = umad(base, 0.1, p.source, b);
  CHECK(genome_equal(child_a, child_b));

  Rng zero_rng(4);
  CHECK(genome_equal(umad(base, 0.0, p.source, zero_rng), base));

  Rng stat_rng(42);
  double total = 0;
  const int reps = 400;
  for (int i = 0; i < reps; ++i)
    total += static_cast<double>(umad(base, 0.1, p.source, stat_rng).size());
  double mean = total / reps;
  CHECK(mean > 97.0);
  CHECK(mean < 103.0);
}

TEST_CASE("simplification strips dead genes without losing fitness") {
  const ProblemSpec& p = problem("number-io");
  GAConfig cfg = tiny_config();
  CaseSet cases = generate_cases(p, cfg.n_train, 0, 5);

  // two dead literals pad the canonical solution
  Genome padded = parse_genome(
      "Lit(3:Int) Lit(4:Int) Local(0) Var(float) APP Local(1) Var(+) APP");
  Individual ind = evaluate_individual(padded, p, cases.train, cfg);
  REQUIRE(ind.perfect());

  Rng rng(7);
  SimplifyStats stats;
  Individual slim = simplify(ind, p, cases.train, cfg, rng, &stats);
  CHECK(slim.total_error == 0.0);
  CHECK(slim.genome.size() <= ind.genome.size());
  CHECK(stats.length_increases == 0);
  CHECK(slim.genome.size() == 6);  // finds the canonical core
  REQUIRE(slim.program.has_value());
  CHECK(ast_size(*slim.program) == 4);
}

TEST_CASE("simplification never worsens an imperfect individual") {
  const ProblemSpec& p = problem("median");
  GAConfig cfg = tiny_config();
  cfg.simplification_steps = 300;
  CaseSet cases = generate_cases(p, cfg.n_train, 0, 8);
  Rng gen_rng(21);
  for (int i = 0; i < 10; ++i) {
    Genome g = random_genome(p.source, 30, 80, gen_rng);
    Individual ind = evaluate_individual(g, p, cases.train, cfg);
    Rng rng(100 + static_cast<uint64_t>(i));
    Individual slim = simplify(ind, p, cases.train, cfg, rng);
    CHECK(slim.total_error <= ind.total_error);
    CHECK(slim.genome.size() <= ind.genome.size());
  }
}

TEST_CASE("evolution finds number-io and is reproducible") {
  const ProblemSpec& p = problem("number-io");
  GAConfig cfg = tiny_config();
  RunResult r1 = run_evolution(p, cfg, 1);
  CHECK(r1.solved_train);
  CHECK(r1.best.total_error == 0.0);
  CHECK(r1.generations <= 26);
  CHECK(r1.history.size() == r1.generations);
  // best-so-far trace never rises
  for (size_t i = 1; i < r1.history.size(); ++i)
    CHECK(r1.history[i].best_so_far <= r1.history[i - 1].best_so_far);

  RunResult r2 = run_evolution(p, cfg, 1);
  CHECK(genome_equal(r1.best.genome, r2.best.genome));
  CHECK(r1.best_generation == r2.best_generation);
  REQUIRE(r1.history.size() == r2.history.size());
  CHECK(r1.history.back().mean_error == r2.history.back().mean_error);

  // a fixed external case set is honored
  CaseSet cases = generate_cases(p, 10, 10, 77);
  RunResult r3 = run_evolution(p, cfg, 1, &cases);
  CHECK(r3.cases.train.size() == 10);
}
