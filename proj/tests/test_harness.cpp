#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_util.hpp"

using namespace evolisp;
namespace fs = std::filesystem;

namespace {

GAConfig tiny_config() {
  GAConfig cfg;
  cfg.population_size = 150;
  cfg.max_generations = 25;
  cfg.n_train = 25;
  cfg.n_test = 50;
  return cfg;
}

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("config text parses keys, comments, and rejects junk") {
  ExperimentConfig cfg = parse_config_text(
      "# an experiment\n"
      "problems = smallest, median\n"
      "runs = 5\n"
      "base_seed = 99  # trailing comment\n"
      "population_size = 40\n"
      "umad_rate = 0.2\n"
      "\n"
      "out_dir = results\n");
  CHECK(cfg.problems == std::vector<std::string>{"smallest", "median"});
  CHECK(cfg.runs == 5);
  CHECK(cfg.base_seed == 99);
  CHECK(cfg.ga.population_size == 40);
  CHECK(cfg.ga.umad_rate == 0.2);
  CHECK(cfg.out_dir == "results");
  CHECK_NOTHROW(cfg.validate());

  CHECK_THROWS_AS(parse_config_text("mystery = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("runs five\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("runs = five\n"), ConfigError);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  cfg.problems = {"smallest"};
  CHECK_NOTHROW(cfg.validate());
  cfg.problems = {"not-a-task"};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.problems = {"smallest"};
  cfg.runs = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.runs = 1;
  cfg.ga.population_size = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("run records serialize to jsonl and back, byte stable") {
  const ProblemSpec& p = problem("number-io");
  GAConfig cfg = tiny_config();
  RunRecord rec = execute_run(p, cfg, 1, 0);
  CHECK(rec.compiled);
  CHECK(rec.solved_train);
  CHECK(rec.generalized);
  CHECK(rec.test_failures == 0);
  CHECK(rec.history.size() == rec.generations);
  CHECK_FALSE(rec.solution_source.empty());

  std::string text = run_record_jsonl(rec, cfg);
  RunRecord back = parse_run_record_jsonl(text);
  CHECK(back.problem == rec.problem);
  CHECK(back.seed == rec.seed);
  CHECK(back.solved_train == rec.solved_train);
  CHECK(back.generalized == rec.generalized);
  CHECK(back.best_total_error == rec.best_total_error);
  CHECK(back.simplified_size == rec.simplified_size);
  CHECK(back.solution_source == rec.solution_source);
  CHECK(back.solution_genome == rec.solution_genome);
  REQUIRE(back.history.size() == rec.history.size());
  for (size_t i = 0; i < back.history.size(); ++i) {
    CHECK(back.history[i].best_error == rec.history[i].best_error);
    CHECK(back.history[i].mean_error == rec.history[i].mean_error);
  }
  CHECK(run_record_jsonl(back, cfg) == text);
  CHECK_THROWS_AS(parse_run_record_jsonl("{\"record\":\"header\"}\n"),
                  ConfigError);
}

TEST_CASE("case files round-trip") {
  const ProblemSpec& p = problem("replace-space-with-newline");
  CaseSet cases = generate_cases(p, 12, 7, 3);
  fs::path path = temp_file("evolisp_cases_test.jsonl");
  write_cases_jsonl(path.string(), cases);
  CaseSet back = read_cases_jsonl(path.string(), p);
  REQUIRE(back.train.size() == cases.train.size());
  REQUIRE(back.test.size() == cases.test.size());
  for (size_t i = 0; i < cases.train.size(); ++i) {
    CHECK(back.train[i].inputs == cases.train[i].inputs);
    CHECK(back.train[i].expected == cases.train[i].expected);
  }
  for (size_t i = 0; i < cases.test.size(); ++i)
    CHECK(back.test[i].expected == cases.test[i].expected);
  fs::remove(path);
}

TEST_CASE("aggregation counts solutions per problem") {
  RunRecord a;
  a.problem = "smallest";
  a.solved_train = true;
  a.generalized = true;
  a.simplified_size = 7;
  RunRecord b = a;
  b.simplified_size = 9;
  RunRecord c;
  c.problem = "smallest";
  RunRecord d;
  d.problem = "median";
  d.solved_train = true;  // train only, failed test
  Report report = aggregate({a, b, c, d});
  REQUIRE(report.problems.size() == 2);
  const ProblemReport& sm = report.problems[0];
  CHECK(sm.problem == "smallest");
  CHECK(sm.runs == 3);
  CHECK(sm.train_solved == 2);
  CHECK(sm.generalized == 2);
  CHECK(sm.min_simplified_size == 7);
  CHECK(sm.mean_simplified_size == 8.0);
  const ProblemReport& md = report.problems[1];
  CHECK(md.runs == 1);
  CHECK(md.train_solved == 1);
  CHECK(md.generalized == 0);

  std::string csv = report_csv(report);
  CHECK(csv.find("smallest,3,2,2,66.7,100.0,7,8.0") != std::string::npos);
  CHECK(csv.find("median,1,1,0,0.0,0.0,,") != std::string::npos);

  std::string table = report_table(report, {{"smallest", 81.0}});
  CHECK(table.find("smallest") != std::string::npos);
  CHECK(table.find("81.0") != std::string::npos);
}

TEST_CASE("reference rate files parse") {
  fs::path path = temp_file("evolisp_rates_test.csv");
  {
    std::ofstream out(path);
    out << "problem,rate\n# comment\nsmallest,98.0\nmedian,45.5\n";
  }
  auto rates = load_reference_rates(path.string());
  CHECK(rates.size() == 2);
  CHECK(rates.at("smallest") == 98.0);
  CHECK(rates.at("median") == 45.5);
  fs::remove(path);
}

TEST_CASE("solution files re-verify against fresh cases") {
  const ProblemSpec& p = problem("number-io");
  CaseSet cases = generate_cases(p, 20, 20, 8);
  std::vector<Case> all = cases.train;
  all.insert(all.end(), cases.test.begin(), cases.test.end());

  fs::path good = temp_file("evolisp_sol_good.sexp");
  {
    std::ofstream out(good);
    out << "(defn number-io [input1 input2] (+ (float input1) input2))\n";
  }
  CHECK(verify_solution_file(good.string(), p, all, 1e6));

  fs::path bad = temp_file("evolisp_sol_bad.sexp");
  {
    std::ofstream out(bad);
    out << "(defn number-io [input1 input2] input2)\n";
  }
  CHECK_FALSE(verify_solution_file(bad.string(), p, all, 1e6));

  fs::path illtyped = temp_file("evolisp_sol_illtyped.sexp");
  {
    std::ofstream out(illtyped);
    out << "(defn number-io [input1 input2] (+ input1 input2))\n";
  }
  CHECK_FALSE(verify_solution_file(illtyped.string(), p, all, 1e6));

  CHECK_FALSE(verify_solution_file("/no/such/file.sexp", p, all, 1e6));
  fs::remove(good);
  fs::remove(bad);
  fs::remove(illtyped);
}

TEST_CASE("experiments write logs, solutions, and a csv") {
  ExperimentConfig cfg;
  cfg.problems = {"number-io"};
  cfg.runs = 2;
  cfg.base_seed = 1;
  cfg.ga = tiny_config();
  fs::path out = fs::temp_directory_path() / "evolisp_exp_test";
  fs::remove_all(out);
  cfg.out_dir = out.string();

  Report report = run_experiment(cfg);
  REQUIRE(report.problems.size() == 1);
  CHECK(report.problems[0].runs == 2);
  CHECK(fs::exists(out / "number-io" / "run_0.jsonl"));
  CHECK(fs::exists(out / "number-io" / "run_1.jsonl"));
  CHECK(fs::exists(out / "report.csv"));

  // per-run files parse back into matching records
  Report again = report_from_dir(out.string());
  REQUIRE(again.problems.size() == 1);
  CHECK(again.problems[0].runs == report.problems[0].runs);
  CHECK(again.problems[0].generalized == report.problems[0].generalized);

  // the same experiment with two workers produces identical bytes
  std::error_code ec;
  fs::path out2 = fs::temp_directory_path() / "evolisp_exp_test2";
  fs::remove_all(out2, ec);
  ExperimentConfig cfg2 = cfg;
  cfg2.out_dir = out2.string();
  cfg2.workers = 2;
  run_experiment(cfg2);
  for (const char* rel : {"number-io/run_0.jsonl", "number-io/run_1.jsonl",
                          "report.csv"}) {
    std::ifstream f1(out / rel), f2(out2 / rel);
    std::stringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    CAPTURE(rel);
    CHECK(b1.str() == b2.str());
  }
  fs::remove_all(out);
  fs::remove_all(out2);
}
