#include "evolisp/harness.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace evolisp {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
  if (problems.empty()) throw ConfigError("no problems selected");
  for (const auto& name : problems)
    if (!has_problem(name)) throw ConfigError("unknown problem: " + name);
  if (runs == 0) throw ConfigError("runs must be positive");
  if (workers == 0) throw ConfigError("workers must be positive");
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
  try {
    ga.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": " + value);
  }
}

double parse_f64(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": " + value);
  }
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "problems") {
    cfg.problems.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) cfg.problems.push_back(item);
    }
  } else if (key == "runs") {
    cfg.runs = parse_u64(key, value);
  } else if (key == "base_seed") {
    cfg.base_seed = parse_u64(key, value);
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "workers") {
    cfg.workers = parse_u64(key, value);
  } else if (key == "population_size") {
    cfg.ga.population_size = parse_u64(key, value);
  } else if (key == "max_generations") {
    cfg.ga.max_generations = parse_u64(key, value);
  } else if (key == "umad_rate") {
    cfg.ga.umad_rate = parse_f64(key, value);
  } else if (key == "simplification_steps") {
    cfg.ga.simplification_steps = parse_u64(key, value);
  } else if (key == "genome_size_min") {
    cfg.ga.genome_size_min = parse_u64(key, value);
  } else if (key == "genome_size_max") {
    cfg.ga.genome_size_max = parse_u64(key, value);
  } else if (key == "n_train") {
    cfg.ga.n_train = parse_u64(key, value);
  } else if (key == "n_test") {
    cfg.ga.n_test = parse_u64(key, value);
  } else if (key == "penalty") {
    cfg.ga.penalty = parse_f64(key, value);
  } else if (key == "step_budget") {
    cfg.ga.step_budget = static_cast<int64_t>(parse_u64(key, value));
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value");
    apply_config_entry(cfg, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RunRecord execute_run(const ProblemSpec& p, const GAConfig& cfg,
                      uint64_t seed, size_t run_index, const CaseSet* cases) {
  RunResult evo = run_evolution(p, cfg, seed, cases);
  Rng simp_rng = Rng(seed).fork(4);
  Individual simplified =
      simplify(evo.best, p, evo.cases.train, cfg, simp_rng);

  RunRecord rec;
  rec.problem = p.name;
  rec.run_index = run_index;
  rec.seed = seed;
  rec.compiled = simplified.program.has_value();
  rec.solved_train = evo.solved_train;
  rec.generations = evo.generations;
  rec.best_generation = evo.best_generation;
  rec.best_total_error = evo.best.total_error;
  rec.best_size = evo.best.program ? ast_size(*evo.best.program) : 0;
  rec.simplified_size =
      simplified.program ? ast_size(*simplified.program) : 0;
  rec.simplified_genome_len = simplified.genome.size();
  rec.history = evo.history;

  if (rec.compiled) {
    rec.solution_source = render_source(*simplified.program, p.name,
                                        p.signature.arg_names);
    rec.solution_genome = genome_to_text(simplified.genome);
  }

  if (rec.solved_train && rec.compiled) {
    size_t failures = 0;
    for (const Case& c : evo.cases.test) {
      std::vector<std::pair<std::string, Value>> args;
      for (size_t i = 0; i < c.inputs.size(); ++i)
        args.emplace_back(p.signature.arg_names[i], c.inputs[i]);
      EvalResult r =
          evaluate(simplified.program->expr, args, p.table, cfg.step_budget);
      if (case_error(p, c.expected, r, cfg.penalty) != 0.0) ++failures;
    }
    rec.test_failures = failures;
    rec.generalized = failures == 0;
  }
  return rec;
}

namespace {

json stats_to_json(const GenerationStats& s) {
  return json{{"record", "generation"},
              {"generation", s.generation},
              {"best_error", s.best_error},
              {"best_so_far", s.best_so_far},
              {"mean_error", s.mean_error},
              {"perfect", s.perfect_count},
              {"mean_genome_len", s.mean_genome_len},
              {"mean_program_size", s.mean_program_size},
              {"compile_failures", s.compile_failures}};
}

GenerationStats stats_from_json(const json& j) {
  GenerationStats s;
  s.generation = j.at("generation").get<size_t>();
  s.best_error = j.at("best_error").get<double>();
  s.best_so_far = j.at("best_so_far").get<double>();
  s.mean_error = j.at("mean_error").get<double>();
  s.perfect_count = j.at("perfect").get<size_t>();
  s.mean_genome_len = j.at("mean_genome_len").get<double>();
  s.mean_program_size = j.at("mean_program_size").get<double>();
  s.compile_failures = j.at("compile_failures").get<size_t>();
  return s;
}

}  // namespace

std::string run_record_jsonl(const RunRecord& rec, const GAConfig& cfg) {
  std::string out;
  json header{{"record", "header"},
              {"problem", rec.problem},
              {"run", rec.run_index},
              {"seed", rec.seed},
              {"population_size", cfg.population_size},
              {"max_generations", cfg.max_generations},
              {"umad_rate", cfg.umad_rate},
              {"simplification_steps", cfg.simplification_steps},
              {"genome_size_min", cfg.genome_size_min},
              {"genome_size_max", cfg.genome_size_max},
              {"n_train", cfg.n_train},
              {"n_test", cfg.n_test},
              {"penalty", cfg.penalty},
              {"step_budget", cfg.step_budget}};
  out += header.dump();
  out += '\n';
  for (const GenerationStats& s : rec.history) {
    out += stats_to_json(s).dump();
    out += '\n';
  }
  json result{{"record", "result"},
              {"solved_train", rec.solved_train},
              {"generalized", rec.generalized},
              {"generations", rec.generations},
              {"best_generation", rec.best_generation},
              {"best_total_error", rec.best_total_error},
              {"best_size", rec.best_size},
              {"simplified_size", rec.simplified_size},
              {"simplified_genome_len", rec.simplified_genome_len},
              {"test_failures", rec.test_failures},
              {"solution", rec.compiled ? json(rec.solution_source)
                                        : json(nullptr)},
              {"genome", rec.compiled ? json(rec.solution_genome)
                                      : json(nullptr)}};
  out += result.dump();
  out += '\n';
  return out;
}

RunRecord parse_run_record_jsonl(const std::string& text) {
  RunRecord rec;
  std::stringstream ss(text);
  std::string line;
  bool saw_result = false;
  while (std::getline(ss, line)) {
    if (trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      const std::string kind = j.at("record").get<std::string>();
      if (kind == "header") {
        rec.problem = j.at("problem").get<std::string>();
        rec.run_index = j.at("run").get<size_t>();
        rec.seed = j.at("seed").get<uint64_t>();
      } else if (kind == "generation") {
        rec.history.push_back(stats_from_json(j));
      } else if (kind == "result") {
        saw_result = true;
        rec.solved_train = j.at("solved_train").get<bool>();
        rec.generalized = j.at("generalized").get<bool>();
        rec.generations = j.at("generations").get<size_t>();
        rec.best_generation = j.at("best_generation").get<size_t>();
        rec.best_total_error = j.at("best_total_error").get<double>();
        rec.best_size = j.at("best_size").get<size_t>();
        rec.simplified_size = j.at("simplified_size").get<size_t>();
        rec.simplified_genome_len =
            j.at("simplified_genome_len").get<size_t>();
        rec.test_failures = j.at("test_failures").get<size_t>();
        if (!j.at("solution").is_null()) {
          rec.compiled = true;
          rec.solution_source = j.at("solution").get<std::string>();
          rec.solution_genome = j.at("genome").get<std::string>();
        }
      }
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad run log line: ") + e.what());
    }
  }
  if (!saw_result)
    throw ConfigError("run log has no result record");
  return rec;
}

Report aggregate(const std::vector<RunRecord>& records) {
  Report report;
  for (const RunRecord& rec : records) {
    ProblemReport* pr = nullptr;
    for (auto& existing : report.problems)
      if (existing.problem == rec.problem) pr = &existing;
    if (!pr) {
      report.problems.push_back(ProblemReport{});
      pr = &report.problems.back();
      pr->problem = rec.problem;
    }
    pr->runs += 1;
    if (rec.solved_train) pr->train_solved += 1;
    if (rec.generalized) {
      pr->generalized += 1;
      if (pr->min_simplified_size == 0 ||
          rec.simplified_size < pr->min_simplified_size)
        pr->min_simplified_size = rec.simplified_size;
      pr->mean_simplified_size += static_cast<double>(rec.simplified_size);
    }
  }
  for (auto& pr : report.problems)
    if (pr.generalized)
      pr.mean_simplified_size /= static_cast<double>(pr.generalized);
  return report;
}

Report run_experiment(const ExperimentConfig& cfg,
                      const std::string& cases_dir) {
  cfg.validate();
  struct Job {
    const ProblemSpec* problem;
    const CaseSet* cases;
    size_t run_index;
  };

  std::vector<const ProblemSpec*> probs;
  for (const auto& name : cfg.problems) probs.push_back(&problem(name));

  std::vector<CaseSet> loaded(probs.size());
  std::vector<const CaseSet*> case_ptr(probs.size(), nullptr);
  if (!cases_dir.empty()) {
    for (size_t i = 0; i < probs.size(); ++i) {
      std::string path =
          (fs::path(cases_dir) / (probs[i]->name + ".cases.jsonl")).string();
      loaded[i] = read_cases_jsonl(path, *probs[i]);
      case_ptr[i] = &loaded[i];
    }
  }

  std::vector<Job> jobs;
  for (size_t pi = 0; pi < probs.size(); ++pi)
    for (size_t r = 0; r < cfg.runs; ++r)
      jobs.push_back(Job{probs[pi], case_ptr[pi], r});

  std::vector<RunRecord> records(jobs.size());
  std::vector<char> failed(jobs.size(), 0);
  std::vector<std::string> failures(jobs.size());
  std::atomic<size_t> next{0};
  std::mutex io_mutex;

  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      uint64_t seed = cfg.base_seed + job.run_index;
      try {
        records[i] =
            execute_run(*job.problem, cfg.ga, seed, job.run_index, job.cases);
      } catch (const std::exception& e) {
        failed[i] = 1;
        failures[i] = e.what();
      }
      std::lock_guard<std::mutex> lock(io_mutex);
      if (failed[i]) {
        std::fprintf(stderr, "[%s] run %zu FAILED: %s\n",
                     job.problem->name.c_str(), job.run_index,
                     failures[i].c_str());
      } else {
        const RunRecord& rec = records[i];
        std::fprintf(stderr, "[%s] run %zu: %s (%zu generations)\n",
                     rec.problem.c_str(), rec.run_index,
                     rec.generalized       ? "solved"
                     : rec.solved_train    ? "train only"
                     : rec.compiled        ? "unsolved"
                                           : "no program",
                     rec.generations);
      }
    }
  };

  size_t n_threads = std::min(cfg.workers, jobs.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<RunRecord> ok;
  size_t n_failed = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    if (failed[i]) {
      ++n_failed;
      continue;
    }
    ok.push_back(records[i]);
    fs::path dir = fs::path(cfg.out_dir) / records[i].problem;
    fs::create_directories(dir);
    std::string base = "run_" + std::to_string(records[i].run_index);
    std::ofstream log(dir / (base + ".jsonl"), std::ios::binary);
    log << run_record_jsonl(records[i], cfg.ga);
    if (records[i].generalized) {
      std::ofstream sol(dir / ("solution_" +
                               std::to_string(records[i].run_index) + ".sexp"),
                        std::ios::binary);
      sol << records[i].solution_source << '\n';
    }
  }

  Report report = aggregate(ok);
  fs::create_directories(cfg.out_dir);
  std::ofstream csv(fs::path(cfg.out_dir) / "report.csv", std::ios::binary);
  csv << report_csv(report);

  if (n_failed > 0)
    throw std::runtime_error(std::to_string(n_failed) + " run(s) failed");
  return report;
}

namespace {

std::string pct(size_t num, size_t den) {
  if (den == 0) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f",
                100.0 * static_cast<double>(num) / static_cast<double>(den));
  return buf;
}

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::string report_csv(const Report& report) {
  std::string out =
      "problem,runs,train_solved,generalized,solution_rate,"
      "generalization_rate,min_simplified_size,mean_simplified_size\n";
  for (const ProblemReport& pr : report.problems) {
    out += pr.problem + ',' + std::to_string(pr.runs) + ',' +
           std::to_string(pr.train_solved) + ',' +
           std::to_string(pr.generalized) + ',';
    out += pr.runs ? pct(pr.generalized, pr.runs) : "";
    out += ',';
    out += pr.train_solved ? pct(pr.generalized, pr.train_solved) : "";
    out += ',';
    out += pr.generalized ? std::to_string(pr.min_simplified_size) : "";
    out += ',';
    out += pr.generalized ? fixed1(pr.mean_simplified_size) : "";
    out += '\n';
  }
  return out;
}

std::string report_table(const Report& report,
                         const std::map<std::string, double>& reference) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %5s %7s %7s %8s %8s %6s %9s",
                "problem", "runs", "train", "general", "solve%", "gen%",
                "min sz", "published");
  out += line;
  out += '\n';
  for (const ProblemReport& pr : report.problems) {
    std::string solve = pct(pr.generalized, pr.runs);
    std::string gen = pr.train_solved ? pct(pr.generalized, pr.train_solved)
                                      : std::string("-");
    std::string minsz =
        pr.generalized ? std::to_string(pr.min_simplified_size)
                       : std::string("-");
    auto ref = reference.find(pr.problem);
    std::string pub =
        ref != reference.end() ? fixed1(ref->second) : std::string("-");
    std::snprintf(line, sizeof(line), "%-28s %5zu %7zu %7zu %8s %8s %6s %9s",
                  pr.problem.c_str(), pr.runs, pr.train_solved,
                  pr.generalized, solve.c_str(), gen.c_str(), minsz.c_str(),
                  pub.c_str());
    out += line;
    out += '\n';
  }
  if (!reference.empty())
    out +=
        "published: reference solution rates from the original benchmark "
        "report, not produced by these runs\n";
  return out;
}

Report report_from_dir(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& sub : fs::directory_iterator(dir)) {
    if (!sub.is_directory()) continue;
    for (const auto& f : fs::directory_iterator(sub.path())) {
      std::string name = f.path().filename().string();
      if (name.rfind("run_", 0) == 0 && f.path().extension() == ".jsonl")
        files.push_back(f.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<RunRecord> records;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open run log: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    records.push_back(parse_run_record_jsonl(buf.str()));
  }
  return aggregate(records);
}

void write_cases_jsonl(const std::string& path, const CaseSet& cases) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write case file: " + path);
  auto write_split = [&](const char* split, const std::vector<Case>& cs) {
    for (const Case& c : cs) {
      json inputs = json::array();
      for (const Value& v : c.inputs) inputs.push_back(to_literal_text(v));
      out << json{{"split", split},
                  {"inputs", inputs},
                  {"expected", to_literal_text(c.expected)}}
                 .dump()
          << '\n';
    }
  };
  write_split("train", cases.train);
  write_split("test", cases.test);
}

CaseSet read_cases_jsonl(const std::string& path, const ProblemSpec& p) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open case file: " + path);
  CaseSet cases;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      Case c;
      const auto& inputs = j.at("inputs");
      if (inputs.size() != p.signature.arg_types.size())
        throw ConfigError("case arity mismatch in " + path);
      for (size_t i = 0; i < inputs.size(); ++i)
        c.inputs.push_back(parse_value(inputs[i].get<std::string>(),
                                       p.signature.arg_types[i]));
      c.expected = parse_value(j.at("expected").get<std::string>(),
                               p.signature.return_type);
      if (j.at("split").get<std::string>() == "train")
        cases.train.push_back(std::move(c));
      else
        cases.test.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw ConfigError("bad case line in " + path + ": " + e.what());
    }
  }
  return cases;
}

std::map<std::string, double> load_reference_rates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference rates: " + path);
  std::map<std::string, double> rates;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    size_t comma = line.find(',');
    if (comma == std::string::npos) continue;
    std::string name = trim(line.substr(0, comma));
    std::string rate = trim(line.substr(comma + 1));
    try {
      rates[name] = std::stod(rate);
    } catch (const std::exception&) {
      // header line
    }
  }
  return rates;
}

bool verify_solution_file(const std::string& path, const ProblemSpec& p,
                          const std::vector<Case>& cases, double penalty) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream buf;
  buf << in.rdbuf();
  ExprPtr body;
  try {
    body = parse_defn(buf.str());
    check_type(body, env_with_args(p.env, p.signature));
  } catch (const std::exception&) {
    return false;
  }
  for (const Case& c : cases) {
    std::vector<std::pair<std::string, Value>> args;
    for (size_t i = 0; i < c.inputs.size(); ++i)
      args.emplace_back(p.signature.arg_names[i], c.inputs[i]);
    EvalResult r = evaluate(body, args, p.table);
    if (case_error(p, c.expected, r, penalty) != 0.0) return false;
  }
  return true;
}

}  // namespace evolisp
