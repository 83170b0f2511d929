#ifndef PRAG_DECODE_H_
#define PRAG_DECODE_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "prag/corpus.h"
#include "prag/distractor.h"
#include "prag/listener.h"
#include "prag/pragmatics.h"
#include "prag/speaker.h"

namespace prag {

// Everything needed to decode a dataset. Pointers are borrowed and must
// outlive the call.
struct DecodeJob {
  const SpeakerModel* speaker = nullptr;
  const ListenerModel* listener = nullptr;
  const AttributeSchema* schema = nullptr;
  const Vocabulary* vocab = nullptr;
  DecodeConfig config;
  DistractorPolicy policy = policy::None{};
  // Required by the mask-all policy.
  const ValueFrequencyTable* freqs = nullptr;
};

struct Prediction {
  std::string id;
  // Detokenized and relexicalized.
  std::string output;
  ScoredCandidate candidate;
};

// Decodes one record. `distractors` are passed through to generate().
Prediction decode_record(const DecodeJob& job, const CorpusRecord& record,
                         const std::vector<InputUnit>& distractors);

// Decodes every record on `workers` threads; results are in input order and
// do not depend on the worker count. Distractors come from job.policy, with
// documents formed by group_documents().
std::vector<Prediction> decode_records(const DecodeJob& job,
                                       std::span<const CorpusRecord> records,
                                       int workers);

// {"id","output","base_logprob","listener_logprob"?,"combined_score"?}
std::string predictions_to_jsonl(std::span<const Prediction> predictions);

struct PredictionRow {
  std::string id;
  std::string output;
};
std::vector<PredictionRow> read_predictions(const std::filesystem::path& path);

}  // namespace prag

#endif  // PRAG_DECODE_H_
