#ifndef PRAG_METRICS_H_
#define PRAG_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prag/corpus.h"
#include "prag/schema.h"

namespace prag {

// Corpus BLEU-4 in [0, 100] over canonical words: clipped n-gram precision,
// geometric mean, brevity penalty, no smoothing. Throws kInvalidArgument on
// empty or misaligned input.
double bleu(std::span<const std::string> hypotheses,
            std::span<const std::string> references);

// LCS-based F1 (beta = 1) for one pair; 0 when either side is empty.
double rouge_l(const std::string& hypothesis, const std::string& reference);

// Mean sentence ROUGE-L over aligned pairs.
double corpus_rouge_l(std::span<const std::string> hypotheses,
                      std::span<const std::string> references);

// Decides whether a text mentions an attribute's value. Categorical and
// delexicalized values match as a whole-word substring of the canonical
// text; boolean attributes match when any lexicon phrase occurs.
class CoverageMatcher {
 public:
  explicit CoverageMatcher(const AttributeSchema& schema);

  // `text` must already be relexicalized.
  bool matches(const CorpusRecord& record, const std::string& attribute,
               const std::string& text) const;

  void set_lexicon(const std::string& attribute,
                   std::vector<std::string> phrases);

 private:
  const AttributeSchema* schema_;
  std::map<std::string, std::vector<std::string>> lexicons_;
};

// Fraction of records assigning `attribute` whose relexicalized output
// mentions it. With no such record the ratio is 1.0 and a warning is issued.
double coverage_ratio(std::span<const CorpusRecord> records,
                      std::span<const std::string> outputs,
                      const std::string& attribute,
                      const CoverageMatcher& matcher);

struct MetricsReport {
  std::optional<double> bleu;
  std::optional<double> rouge_l;
  std::map<std::string, double> coverage;
};

// {"bleu": x, "rouge_l": y, "coverage": {attr: z}}; absent metrics omitted.
std::string metrics_to_json(const MetricsReport& report);

}  // namespace prag

#endif  // PRAG_METRICS_H_
