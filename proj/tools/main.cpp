#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "evolisp/harness.hpp"

namespace {

using namespace evolisp;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void apply_set_entries(ExperimentConfig& cfg,
                       const std::vector<std::string>& entries) {
  for (const auto& entry : entries) {
    size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key=value, got: " + entry);
    apply_config_entry(cfg, entry.substr(0, eq), entry.substr(eq + 1));
  }
}

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& problems,
            const std::vector<std::string>& sets, const std::string& out_dir,
            const std::string& cases_dir) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = parse_config_file(config_path);
  if (const char* env = std::getenv("EVOLISP_OUT"); env && *env)
    cfg.out_dir = env;
  apply_set_entries(cfg, sets);
  if (!problems.empty()) cfg.problems = problems;
  if (!out_dir.empty()) cfg.out_dir = out_dir;

  bool partial = false;
  Report report;
  try {
    report = run_experiment(cfg, cases_dir);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    std::cerr << "warning: " << e.what() << '\n';
    report = report_from_dir(cfg.out_dir);
    partial = true;
  }
  std::cout << report_table(report, {});
  std::cout << "results in " << cfg.out_dir << "/report.csv\n";
  return partial ? 3 : 0;
}

int cmd_compile(const std::string& problem_name,
                const std::string& genome_path, const std::string& text) {
  const ProblemSpec& p = problem(problem_name);
  Genome g = parse_genome(text.empty() ? slurp(genome_path) : text);
  FreshNames fresh;
  auto ast = compile_genome(g, p.signature, p.env, fresh);
  if (!ast) {
    std::cerr << "genome compiles to no usable program\n";
    return 1;
  }
  std::cout << "type: " << to_string(ast->type) << '\n';
  std::cout << render_source(*ast, p.name, p.signature.arg_names) << '\n';
  return 0;
}

int cmd_simplify(const std::string& problem_name,
                 const std::string& genome_path, uint64_t seed, size_t steps,
                 size_t n_train) {
  const ProblemSpec& p = problem(problem_name);
  GAConfig ga;
  ga.simplification_steps = steps;
  ga.n_train = n_train;
  CaseSet cases =
      generate_cases(p, ga.n_train, 0, Rng(seed).fork(1).next_u64());

  Genome g = parse_genome(slurp(genome_path));
  Individual before = evaluate_individual(g, p, cases.train, ga);
  Rng rng = Rng(seed).fork(4);
  Individual after = simplify(before, p, cases.train, ga, rng);

  std::cout << "before: " << before.genome.size() << " genes, "
            << (before.program ? ast_size(*before.program) : 0)
            << " atoms, error " << format_double(before.total_error) << '\n';
  std::cout << "after:  " << after.genome.size() << " genes, "
            << (after.program ? ast_size(*after.program) : 0)
            << " atoms, error " << format_double(after.total_error) << '\n';
  std::cout << "genome: " << genome_to_text(after.genome) << '\n';
  if (after.program)
    std::cout << render_source(*after.program, p.name,
                               p.signature.arg_names)
              << '\n';
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& reference_path,
               bool csv) {
  Report report = report_from_dir(in_dir);
  if (csv) {
    std::cout << report_csv(report);
    return 0;
  }
  std::map<std::string, double> reference;
  if (!reference_path.empty())
    reference = load_reference_rates(reference_path);
  std::cout << report_table(report, reference);
  return 0;
}

int cmd_cases(const std::string& problem_name, uint64_t seed, size_t n_train,
              size_t n_test, const std::string& out_path) {
  const ProblemSpec& p = problem(problem_name);
  CaseSet cases = generate_cases(p, n_train, n_test, seed);
  write_cases_jsonl(out_path, cases);
  std::cout << "wrote " << cases.train.size() << " train + "
            << cases.test.size() << " test cases to " << out_path << '\n';
  return 0;
}

int cmd_verify(const std::string& problem_name,
               const std::string& solution_path, uint64_t seed,
               size_t n_train, size_t n_test) {
  const ProblemSpec& p = problem(problem_name);
  CaseSet cases =
      generate_cases(p, n_train, n_test, Rng(seed).fork(1).next_u64());
  std::vector<Case> all = cases.train;
  all.insert(all.end(), cases.test.begin(), cases.test.end());
  GAConfig defaults;
  bool ok = verify_solution_file(solution_path, p, all, defaults.penalty);
  std::cout << (ok ? "solution passes all cases\n"
                   : "solution fails at least one case\n");
  return ok ? 0 : 1;
}

int cmd_builtins(const std::string& problem_name) {
  if (problem_name.empty()) {
    std::cout << builtin_reference(builtin_library());
  } else {
    std::cout << builtin_reference(problem(problem_name).builtins);
  }
  return 0;
}

int cmd_problems() {
  for (const auto& name : problem_names()) {
    const ProblemSpec& p = problem(name);
    std::cout << name << ": (";
    for (size_t i = 0; i < p.signature.arg_types.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << to_string(p.signature.arg_types[i]);
    }
    std::cout << ") -> " << to_string(p.signature.return_type) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolisp: type-safe program synthesis by genome evolution"};
  app.require_subcommand(1);

  std::string config_path, out_dir, cases_dir;
  std::vector<std::string> run_problems, set_entries;
  auto* run = app.add_subcommand("run", "run an evolution experiment");
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--problem", run_problems,
                  "problem name (repeatable, overrides config)");
  run->add_option("--set", set_entries, "override one config key=value");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--cases", cases_dir,
                  "directory of <problem>.cases.jsonl files to use");

  std::string c_problem, c_genome, c_text;
  auto* compile = app.add_subcommand("compile",
                                     "compile a genome and print the program");
  compile->add_option("--problem", c_problem, "problem name")->required();
  auto* gfile = compile->add_option("genome", c_genome, "genome text file");
  compile->add_option("--text", c_text, "genome text inline")->excludes(gfile);

  std::string s_problem, s_genome;
  uint64_t s_seed = 1;
  size_t s_steps = 2000, s_train = 100;
  auto* simp = app.add_subcommand("simplify",
                                  "hill-climb a genome to a smaller one");
  simp->add_option("--problem", s_problem, "problem name")->required();
  simp->add_option("genome", s_genome, "genome text file")->required();
  simp->add_option("--seed", s_seed, "run seed (cases and climb derive here)");
  simp->add_option("--steps", s_steps, "deletion attempts");
  simp->add_option("--train", s_train, "training cases to score against");

  std::string r_in = "out", r_reference;
  bool r_csv = false;
  auto* rep = app.add_subcommand("report", "aggregate run logs into a table");
  rep->add_option("--in", r_in, "directory of <problem>/run_*.jsonl logs");
  rep->add_option("--reference", r_reference,
                  "csv of published solution rates to display alongside");
  rep->add_flag("--csv", r_csv, "emit csv instead of the table");

  std::string k_problem, k_out;
  uint64_t k_seed = 1;
  size_t k_train = 100, k_test = 300;
  auto* cases = app.add_subcommand("cases", "export a deterministic case set");
  cases->add_option("--problem", k_problem, "problem name")->required();
  cases->add_option("--seed", k_seed, "case seed");
  cases->add_option("--train", k_train, "training cases");
  cases->add_option("--test", k_test, "test cases");
  cases->add_option("--out", k_out, "output jsonl path")->required();

  std::string v_problem, v_solution;
  uint64_t v_seed = 1;
  size_t v_train = 100, v_test = 300;
  auto* verify = app.add_subcommand("verify",
                                    "re-check a solution file on fresh cases");
  verify->add_option("--problem", v_problem, "problem name")->required();
  verify->add_option("solution", v_solution, "solution .sexp file")
      ->required();
  verify->add_option("--seed", v_seed, "run seed the cases derive from");
  verify->add_option("--train", v_train, "training cases");
  verify->add_option("--test", v_test, "test cases");

  std::string b_problem;
  auto* blt = app.add_subcommand("builtins", "print the builtin reference");
  blt->add_option("--problem", b_problem, "restrict to one problem's library");

  auto* prb = app.add_subcommand("problems", "list problems and signatures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed())
      return cmd_run(config_path, run_problems, set_entries, out_dir,
                     cases_dir);
    if (compile->parsed()) {
      if (c_genome.empty() && c_text.empty())
        throw ConfigError("compile needs a genome file or --text");
      return cmd_compile(c_problem, c_genome, c_text);
    }
    if (simp->parsed())
      return cmd_simplify(s_problem, s_genome, s_seed, s_steps, s_train);
    if (rep->parsed()) return cmd_report(r_in, r_reference, r_csv);
    if (cases->parsed())
      return cmd_cases(k_problem, k_seed, k_train, k_test, k_out);
    if (verify->parsed())
      return cmd_verify(v_problem, v_solution, v_seed, v_train, v_test);
    if (blt->parsed()) return cmd_builtins(b_problem);
    if (prb->parsed()) return cmd_problems();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const EnvError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const GenomeParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SourceParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const TypeParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
