#ifndef PRAG_SYNTHETIC_H_
#define PRAG_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "prag/corpus.h"
#include "prag/schema.h"

namespace prag {

// std::mt19937_64 (bit-exact across standard libraries) with integer and
// real derivations written out here, since the std distributions are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform in [0, n) by rejection sampling; n > 0.
  std::size_t index(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

// Template grammar for restaurant descriptions.
//
// A reference is "<name clause> <c1>, <c2> and <c3>." with the non-name
// clauses in random order; each non-name clause is dropped independently
// with probability `omission_rate`. Templates contain "{v}", which is
// replaced by the value verbatim.
struct SyntheticGrammar {
  AttributeSchema schema;
  // Non-name attribute -> probability that an MR assigns it.
  std::map<std::string, double> presence;
  double omission_rate = 0.1;
  // Attribute -> clause templates (categorical and delexicalized).
  std::map<std::string, std::vector<std::string>> templates;
  // Boolean attribute -> value -> clause templates.
  std::map<std::string, std::map<std::string, std::vector<std::string>>>
      boolean_templates;
  // Delexicalized attribute -> proper nouns to draw from.
  std::map<std::string, std::vector<std::string>> surface_values;
  // Predicate used when every non-name clause is absent or dropped.
  std::vector<std::string> fallback_templates;
  // Attribute that is always present and opens the reference.
  std::string subject_attribute = "name";

  // Throws kInvalidArgument when probabilities leave [0, 1], an attribute
  // lacks two templates, or a template does not contain "{v}".
  void validate() const;
};

SyntheticGrammar default_grammar();
SyntheticGrammar default_grammar(const AttributeSchema& schema);

SyntheticGrammar load_grammar(const std::filesystem::path& path,
                              const AttributeSchema& schema);
SyntheticGrammar parse_grammar_json(std::string_view text,
                                    const AttributeSchema& schema);
std::string grammar_to_json(const SyntheticGrammar& grammar);

// n lexicalized records with ids "syn-000000", ... Pure in (grammar, n,
// seed).
std::vector<CorpusRecord> generate_corpus(const SyntheticGrammar& grammar,
                                          std::size_t n, std::uint64_t seed);

}  // namespace prag

#endif  // PRAG_SYNTHETIC_H_
