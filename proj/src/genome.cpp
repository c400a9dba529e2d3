#include "evolisp/genome.hpp"

#include <cmath>
#include <stdexcept>

namespace evolisp {

PushSeq nest_chunks(const Genome& genome) {
  std::vector<PushSeq> frames(1);
  for (const Gene& g : genome) {
    if (std::holds_alternative<OpenGene>(g)) {
      frames.emplace_back();
    } else if (std::holds_alternative<CloseGene>(g)) {
      if (frames.size() > 1) {
        PushSeq done = std::move(frames.back());
        frames.pop_back();
        frames.back().push_back(chunk_item(std::move(done)));
      }
      // unmatched CLOSE: ignored
    } else {
      frames.back().push_back(gene_item(g));
    }
  }
  while (frames.size() > 1) {
    PushSeq done = std::move(frames.back());
    frames.pop_back();
    frames.back().push_back(chunk_item(std::move(done)));
  }
  return std::move(frames.front());
}

Genome flatten(const PushSeq& seq) {
  Genome out;
  for (const PushItem& item : seq) {
    if (item.is_chunk()) {
      out.push_back(OpenGene{});
      Genome inner = flatten(item.chunk());
      out.insert(out.end(), inner.begin(), inner.end());
      out.push_back(CloseGene{});
    } else {
      out.push_back(item.gene());
    }
  }
  return out;
}

size_t push_seq_gene_count(const PushSeq& seq) {
  size_t n = 0;
  for (const PushItem& item : seq)
    n += item.is_chunk() ? push_seq_gene_count(item.chunk()) : 1;
  return n;
}

void GeneDistribution::validate() const {
  const double ws[] = {variable, local,       literal, erc,
                       abstraction, application, open,    close};
  double sum = 0;
  for (double w : ws) {
    if (w < 0) throw std::invalid_argument("negative gene category weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("gene category weights must sum to 1");
}

void GeneticSource::validate(const TypeEnv& env) const {
  distribution.validate();
  if (distribution.variable > 0 && vars.empty())
    throw std::invalid_argument("variable weight > 0 with empty var pool");
  if (distribution.literal > 0 && literals.empty())
    throw std::invalid_argument("literal weight > 0 with empty literal pool");
  if (distribution.erc > 0 && erc_generators.empty())
    throw std::invalid_argument("erc weight > 0 with no erc generators");
  if (distribution.abstraction > 0 && abs_arities.empty())
    throw std::invalid_argument("abstraction weight > 0 with no arities");
  if (distribution.local > 0 && local_index_bound == 0)
    throw std::invalid_argument("local index bound must be positive");
  for (const auto& [name, scheme] : vars) {
    const Scheme* bound = env.find(name);
    if (!bound) throw std::invalid_argument("var not in environment: " + name);
    (void)scheme;
  }
  for (const auto& [v, t] : literals)
    if (!value_conforms(t, v))
      throw std::invalid_argument("literal does not inhabit its type");
}

Gene random_gene(const GeneticSource& source, Rng& rng) {
  const GeneDistribution& d = source.distribution;
  double u = rng.next_double();
  if ((u -= d.variable) < 0) return VarGene{rng.pick(source.vars).first};
  if ((u -= d.local) < 0)
    return LocalGene{
        static_cast<uint32_t>(rng.index(source.local_index_bound))};
  if ((u -= d.literal) < 0) {
    const auto& [v, t] = rng.pick(source.literals);
    return LitGene{v, t};
  }
  if ((u -= d.erc) < 0) {
    auto [v, t] = rng.pick(source.erc_generators).gen(rng);
    return LitGene{std::move(v), std::move(t)};
  }
  if ((u -= d.abstraction) < 0) return AbsGene{rng.pick(source.abs_arities)};
  if ((u -= d.application) < 0) return AppGene{};
  if ((u -= d.open) < 0) return OpenGene{};
  return CloseGene{};
}

Genome random_genome(const GeneticSource& source, size_t min_size,
                     size_t max_size, Rng& rng) {
  size_t len = static_cast<size_t>(rng.uniform_int(
      static_cast<int64_t>(min_size), static_cast<int64_t>(max_size)));
  Genome g;
  g.reserve(len);
  for (size_t i = 0; i < len; ++i) g.push_back(random_gene(source, rng));
  return g;
}

bool gene_equal(const Gene& a, const Gene& b) {
  if (a.index() != b.index()) return false;
  if (const auto* la = std::get_if<LitGene>(&a)) {
    const auto* lb = std::get_if<LitGene>(&b);
    return la->value == lb->value && type_equal(la->type, lb->type);
  }
  if (const auto* va = std::get_if<VarGene>(&a))
    return va->name == std::get_if<VarGene>(&b)->name;
  if (const auto* xa = std::get_if<LocalGene>(&a))
    return xa->index == std::get_if<LocalGene>(&b)->index;
  if (const auto* fa = std::get_if<AbsGene>(&a)) {
    const auto* fb = std::get_if<AbsGene>(&b);
    if (fa->arg_types.size() != fb->arg_types.size()) return false;
    for (size_t i = 0; i < fa->arg_types.size(); ++i)
      if (!type_equal(fa->arg_types[i], fb->arg_types[i])) return false;
    return true;
  }
  return true;  // APP / LET / OPEN / CLOSE carry no payload
}

bool genome_equal(const Genome& a, const Genome& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!gene_equal(a[i], b[i])) return false;
  return true;
}

std::string to_text(const Gene& g) {
  if (const auto* l = std::get_if<LitGene>(&g))
    return "Lit(" + to_typed_text(l->value, l->type) + ")";
  if (const auto* v = std::get_if<VarGene>(&g)) return "Var(" + v->name + ")";
  if (const auto* x = std::get_if<LocalGene>(&g))
    return "Local(" + std::to_string(x->index) + ")";
  if (std::holds_alternative<AppGene>(g)) return "APP";
  if (const auto* f = std::get_if<AbsGene>(&g)) {
    std::string out = "ABS[";
    for (size_t i = 0; i < f->arg_types.size(); ++i) {
      if (i) out += ',';
      out += to_string(f->arg_types[i]);
    }
    return out + "]";
  }
  if (std::holds_alternative<LetGene>(g)) return "LET";
  if (std::holds_alternative<OpenGene>(g)) return "OPEN";
  return "CLOSE";
}

std::string genome_to_text(const Genome& genome) {
  std::string out;
  for (size_t i = 0; i < genome.size(); ++i) {
    if (i) out += ' ';
    out += to_text(genome[i]);
  }
  return out;
}

namespace {

// Splits on whitespace outside quotes and bracket nesting, so sequence and
// string literals inside Lit(...) stay one token.
std::vector<std::string> tokenize_genome(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  int depth = 0;
  char quote = 0;
  bool escaped = false;
  for (char c : text) {
    if (quote) {
      cur += c;
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == quote)
        quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      cur += c;
      continue;
    }
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        tokens.push_back(std::move(cur));
        cur.clear();
      }
      continue;
    }
    cur += c;
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  if (depth != 0 || quote)
    throw GenomeParseError("unbalanced brackets or quote in genome text");
  return tokens;
}

Gene parse_gene(const std::string& tok) {
  auto payload = [&](size_t head_len) -> std::string {
    if (tok.size() < head_len + 2 || tok[head_len] != '(' ||
        tok.back() != ')')
      throw GenomeParseError("malformed gene token: " + tok);
    return tok.substr(head_len + 1, tok.size() - head_len - 2);
  };
  if (tok == "APP") return AppGene{};
  if (tok == "LET") return LetGene{};
  if (tok == "OPEN") return OpenGene{};
  if (tok == "CLOSE") return CloseGene{};
  if (tok.rfind("Lit", 0) == 0) {
    auto [v, t] = parse_typed_value(payload(3));
    return LitGene{std::move(v), std::move(t)};
  }
  if (tok.rfind("Var", 0) == 0) return VarGene{payload(3)};
  if (tok.rfind("Local", 0) == 0) {
    const std::string body = payload(5);
    size_t used = 0;
    unsigned long idx = std::stoul(body, &used);
    if (used != body.size())
      throw GenomeParseError("malformed local index: " + tok);
    return LocalGene{static_cast<uint32_t>(idx)};
  }
  if (tok.rfind("ABS[", 0) == 0 && tok.back() == ']') {
    std::string body = tok.substr(4, tok.size() - 5);
    AbsGene g;
    size_t start = 0;
    int depth = 0;
    for (size_t i = 0; i <= body.size(); ++i) {
      if (i == body.size() || (body[i] == ',' && depth == 0)) {
        std::string part = body.substr(start, i - start);
        if (!part.empty()) g.arg_types.push_back(parse_type(part));
        start = i + 1;
      } else if (body[i] == '[') {
        ++depth;
      } else if (body[i] == ']') {
        --depth;
      }
    }
    if (g.arg_types.empty())
      throw GenomeParseError("abstraction needs at least one parameter type");
    return g;
  }
  throw GenomeParseError("unknown gene token: " + tok);
}

}  // namespace

Genome parse_genome(std::string_view text) {
  Genome out;
  for (const std::string& tok : tokenize_genome(text)) {
    try {
      out.push_back(parse_gene(tok));
    } catch (const GenomeParseError&) {
      throw;
    } catch (const std::exception& e) {
      // value and type sub-parsers raise their own errors; stoul raises too
      throw GenomeParseError("bad gene token '" + tok + "': " + e.what());
    }
  }
  return out;
}

}  // namespace evolisp
