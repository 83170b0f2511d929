#include "prag/training.h"

namespace prag {

Vocabulary corpus_vocabulary(std::span<const CorpusRecord> records,
                             const AttributeSchema& schema) {
  std::vector<std::string> texts;
  texts.reserve(records.size());
  for (const auto& r : records) texts.push_back(r.reference);
  return build_vocabulary(texts, schema);
}

TokenSequence reference_tokens(const CorpusRecord& record,
                               const Vocabulary& vocab) {
  TokenSequence seq = tokenize(record.reference, vocab);
  seq.ids.push_back(kEos);
  return seq;
}

std::vector<std::pair<InputUnit, TokenSequence>> speaker_pairs(
    std::span<const CorpusRecord> records, const Vocabulary& vocab) {
  std::vector<std::pair<InputUnit, TokenSequence>> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.emplace_back(r.mr, reference_tokens(r, vocab));
  }
  return out;
}

std::vector<std::pair<MeaningRepresentation, TokenSequence>> listener_pairs(
    std::span<const CorpusRecord> records, const Vocabulary& vocab) {
  std::vector<std::pair<MeaningRepresentation, TokenSequence>> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.emplace_back(r.mr, reference_tokens(r, vocab));
  }
  return out;
}

}  // namespace prag
