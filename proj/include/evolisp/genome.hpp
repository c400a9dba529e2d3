#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "evolisp/rng.hpp"
#include "evolisp/types.hpp"
#include "evolisp/value.hpp"

namespace evolisp {

// Linear genome alphabet. OPEN/CLOSE are structural markers that chunk
// translation folds into nested chunks; they never reach the compiler.
struct LitGene {
  Value value;
  TypePtr type;
};
struct VarGene {
  std::string name;
};
struct LocalGene {
  uint32_t index;  // resolved modulo the number of locals in scope
};
struct AppGene {};
struct AbsGene {
  std::vector<TypePtr> arg_types;
};
struct LetGene {};
struct OpenGene {};
struct CloseGene {};

using Gene = std::variant<LitGene, VarGene, LocalGene, AppGene, AbsGene,
                          LetGene, OpenGene, CloseGene>;
using Genome = std::vector<Gene>;

// Nested form consumed by the compiler: a sequence of genes and chunks.
struct PushItem;
using PushSeq = std::vector<PushItem>;

struct PushItem {
  std::variant<Gene, PushSeq> item;

  bool is_chunk() const { return item.index() == 1; }
  const Gene& gene() const { return std::get<Gene>(item); }
  const PushSeq& chunk() const { return std::get<PushSeq>(item); }
};

inline PushItem gene_item(Gene g) { return PushItem{std::move(g)}; }
inline PushItem chunk_item(PushSeq s) { return PushItem{std::move(s)}; }

// OPEN starts a chunk, CLOSE ends the innermost one. An unmatched CLOSE is
// ignored; an unmatched OPEN is closed at the end of the genome. Total: every
// genome translates.
PushSeq nest_chunks(const Genome& genome);

// Inverse of translation up to marker placement (chunks re-emit OPEN/CLOSE).
Genome flatten(const PushSeq& seq);

size_t push_seq_gene_count(const PushSeq& seq);

// Category weights for random gene draws. Must sum to 1.
struct GeneDistribution {
  double variable = 0.20;
  double local = 0.15;
  double literal = 0.15;
  double erc = 0.10;
  double abstraction = 0.15;
  double application = 0.15;
  double open = 0.05;
  double close = 0.05;

  void validate() const;  // throws std::invalid_argument
};

// Ephemeral random constant: draws a fresh literal.
struct ErcGenerator {
  std::string label;
  std::function<std::pair<Value, TypePtr>(Rng&)> gen;
};

// Everything random genome construction may draw from, fixed per problem.
struct GeneticSource {
  std::vector<std::pair<std::string, Scheme>> vars;
  std::vector<std::pair<Value, TypePtr>> literals;
  std::vector<ErcGenerator> erc_generators;
  std::vector<std::vector<TypePtr>> abs_arities;
  GeneDistribution distribution;
  uint32_t local_index_bound = 16;

  // Checks the distribution and that every positively-weighted category has
  // a non-empty pool and every var name resolves in env.
  void validate(const TypeEnv& env) const;
};

Gene random_gene(const GeneticSource& source, Rng& rng);
Genome random_genome(const GeneticSource& source, size_t min_size,
                     size_t max_size, Rng& rng);

bool gene_equal(const Gene& a, const Gene& b);
bool genome_equal(const Genome& a, const Genome& b);

// Whitespace-separated token text, round-trippable:
//   OPEN Local(1) Lit(0:Int) Var(max) APP CLOSE ABS[Int] LET
std::string to_text(const Gene& g);
std::string genome_to_text(const Genome& genome);

struct GenomeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Genome parse_genome(std::string_view text);

}  // namespace evolisp
