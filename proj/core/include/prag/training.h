#ifndef PRAG_TRAINING_H_
#define PRAG_TRAINING_H_

#include <span>
#include <utility>
#include <vector>

#include "prag/corpus.h"
#include "prag/linearize.h"
#include "prag/schema.h"
#include "prag/vocabulary.h"

namespace prag {

// Vocabulary over the (delexicalized) references of `records` plus the
// schema's attribute names and values.
Vocabulary corpus_vocabulary(std::span<const CorpusRecord> records,
                             const AttributeSchema& schema);

// tokenize(reference) followed by EOS.
TokenSequence reference_tokens(const CorpusRecord& record,
                               const Vocabulary& vocab);

std::vector<std::pair<InputUnit, TokenSequence>> speaker_pairs(
    std::span<const CorpusRecord> records, const Vocabulary& vocab);

std::vector<std::pair<MeaningRepresentation, TokenSequence>> listener_pairs(
    std::span<const CorpusRecord> records, const Vocabulary& vocab);

}  // namespace prag

#endif  // PRAG_TRAINING_H_
