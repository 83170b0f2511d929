#ifndef PRAG_LINEARIZE_H_
#define PRAG_LINEARIZE_H_

#include <string>
#include <vector>

#include "prag/schema.h"
#include "prag/vocabulary.h"

namespace prag {

// Conditioning context handed to a speaker: linearized input tokens, always
// ending in kSep.
using Context = std::vector<TokenId>;

// Schema-order "attrname value-tokens ..." clauses followed by kSep. Throws
// kDataLoss("unbuildable context") when a token is not in `vocab`.
Context linearize_mr(const MeaningRepresentation& mr,
                     const AttributeSchema& schema, const Vocabulary& vocab);

// Token inputs keep their ids (BOS/EOS/SEP dropped) and gain a final kSep.
Context linearize_tokens(const TokenSequence& seq);

// Binds a schema and vocabulary so any InputUnit can be linearized.
class Linearizer {
 public:
  Linearizer(const AttributeSchema& schema, const Vocabulary& vocab)
      : schema_(&schema), vocab_(&vocab) {}

  Context operator()(const InputUnit& unit) const;

  const AttributeSchema& schema() const { return *schema_; }
  const Vocabulary& vocab() const { return *vocab_; }

 private:
  const AttributeSchema* schema_;
  const Vocabulary* vocab_;
};

// Sorted union of the canonical words of `texts` and of every schema
// attribute name and value, behind the reserved tokens.
Vocabulary build_vocabulary(const std::vector<std::string>& texts,
                            const AttributeSchema& schema);

}  // namespace prag

#endif  // PRAG_LINEARIZE_H_
