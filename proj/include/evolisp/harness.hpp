#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evolisp/evolution.hpp"
#include "evolisp/problems.hpp"

namespace evolisp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<std::string> problems;
  size_t runs = 1;
  uint64_t base_seed = 1;
  std::string out_dir = "out";
  size_t workers = 1;
  GAConfig ga;

  void validate() const;  // throws ConfigError
};

// Flat key=value lines; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
// Applies one "key=value" setting.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

// One finished run: evolution, simplification of the best individual, and a
// test-set verdict for train-perfect programs.
struct RunRecord {
  std::string problem;
  size_t run_index = 0;
  uint64_t seed = 0;
  bool compiled = false;
  bool solved_train = false;
  bool generalized = false;
  size_t generations = 0;
  size_t best_generation = 0;
  double best_total_error = 0.0;
  size_t best_size = 0;        // program size before simplification
  size_t simplified_size = 0;  // and after
  size_t simplified_genome_len = 0;
  size_t test_failures = 0;  // test cases with nonzero error (if tested)
  std::string solution_source;  // rendered simplified program, if compiled
  std::string solution_genome;  // simplified genome text, if compiled
  std::vector<GenerationStats> history;
};

RunRecord execute_run(const ProblemSpec& p, const GAConfig& cfg,
                      uint64_t seed, size_t run_index,
                      const CaseSet* cases = nullptr);

// JSONL serialization of a run: a header line, one line per generation, and
// a result line. Content is a pure function of the run record, so replays
// with the same seed are byte-identical.
std::string run_record_jsonl(const RunRecord& rec, const GAConfig& cfg);
RunRecord parse_run_record_jsonl(const std::string& text);

struct ProblemReport {
  std::string problem;
  size_t runs = 0;
  size_t train_solved = 0;
  size_t generalized = 0;
  size_t min_simplified_size = 0;   // over generalizing runs; 0 when none
  double mean_simplified_size = 0;  // over generalizing runs
};

struct Report {
  std::vector<ProblemReport> problems;
};

Report aggregate(const std::vector<RunRecord>& records);

// Runs every (problem, run) job, writes <out>/<problem>/run_<i>.jsonl, a
// solution_<i>.sexp per generalizing run, and <out>/report.csv. Jobs are
// distributed over cfg.workers threads; outputs do not depend on worker
// count. Cases may be loaded from <cases_dir>/<problem>.cases.jsonl.
Report run_experiment(const ExperimentConfig& cfg,
                      const std::string& cases_dir = "");

std::string report_csv(const Report& report);
// Text table; published reference rates (when provided) appear alongside.
std::string report_table(const Report& report,
                         const std::map<std::string, double>& reference);

Report report_from_dir(const std::string& dir);

// Case files: one JSON object per line with typed literal inputs/output.
void write_cases_jsonl(const std::string& path, const CaseSet& cases);
CaseSet read_cases_jsonl(const std::string& path, const ProblemSpec& p);

// problem name -> published solution rate (percent), from a two-column csv.
std::map<std::string, double> load_reference_rates(const std::string& path);

// Reloads a rendered solution file, type-checks it against the problem's
// environment, and scores it on the given cases; true when every case has
// zero error.
bool verify_solution_file(const std::string& path, const ProblemSpec& p,
                          const std::vector<Case>& cases, double penalty);

}  // namespace evolisp
