#ifndef PRAG_PRAGMATICS_H_
#define PRAG_PRAGMATICS_H_

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prag/linearize.h"
#include "prag/listener.h"
#include "prag/speaker.h"

namespace prag {

enum class DecodeMode { kBase, kReconstructor, kDistractor };

std::string_view to_string(DecodeMode mode);
DecodeMode parse_decode_mode(std::string_view s);

struct DecodeConfig {
  int beam_size = 10;
  // Maximum number of generated tokens, EOS included.
  int max_len = 50;
  // Listener weight for reconstructor reranking, in [0, 1].
  double lambda = 0.4;
  // Belief exponent for distractor decoding, >= 0.
  double alpha = 0.2;
  DecodeMode mode = DecodeMode::kBase;

  // Throws kInvalidArgument when a field is out of range.
  void validate() const;

  // Beam 10, lambda 0.4, alpha 0.2.
  static DecodeConfig meaning_representation_preset();
  // Beam 20, lambda 0.9, alpha 1.0.
  static DecodeConfig summarization_preset();
};

struct ScoredCandidate {
  TokenSequence output;
  double base_logprob = 0.0;
  std::optional<double> listener_logprob;
  // Present iff listener_logprob is.
  std::optional<double> combined_score;
  // Cumulative log S1^D; set by distractor decoding only.
  std::optional<double> pragmatic_logprob;
};

// Orders by `score` descending, then base_logprob descending, then token ids
// lexicographically ascending.
bool ranks_before(double score_a, double base_a, std::span<const TokenId> a,
                  double score_b, double base_b, std::span<const TokenId> b);

// Distribution over candidate inputs. support[0] is the true input, the rest
// are distractors. The support is shared between hypotheses.
struct BeliefState {
  std::shared_ptr<const std::vector<Context>> support;
  std::vector<double> log_beliefs;

  // Uniform p_0 over a support of size >= 2.
  static BeliefState uniform(std::vector<Context> support);
  static BeliefState uniform(std::shared_ptr<const std::vector<Context>> s);

  std::vector<double> probabilities() const;
};

struct Hypothesis {
  TokenSequence prefix;
  double base_logprob = 0.0;
  double pragmatic_logprob = 0.0;
  BeliefState belief;

  bool finished() const { return prefix.terminated(); }
};

// Beam search over S0(. | context). Returns up to beam_size candidates, each
// EOS-terminated or max_len long, ranked by base_logprob.
std::vector<ScoredCandidate> beam_search(const SpeakerModel& speaker,
                                         std::span<const TokenId> context,
                                         const DecodeConfig& config);

// combined = lambda * log L^R(i | o) + (1 - lambda) * log S0(o | i), ranked
// by combined score. Throws kInvalidArgument on an empty candidate list.
std::vector<ScoredCandidate> rerank_reconstructor(
    const InputUnit& input, std::vector<ScoredCandidate> candidates,
    const ListenerModel& listener, double lambda);

// p_t(j) proportional to S0(token | j, prefix) p_{t-1}(j). Throws
// kFailedPrecondition("belief collapse") if every support member gives the
// token zero probability.
BeliefState belief_update(const BeliefState& belief,
                          const SpeakerModel& speaker,
                          std::span<const TokenId> prefix, TokenId token);

// Same update from precomputed S0 vectors (one per support member).
BeliefState belief_update(const BeliefState& belief,
                          std::span<const std::vector<double>> step_logprobs,
                          TokenId token);

// log S1^D(. | i, prefix) over the vocabulary:
//   score(v) = alpha * log p^{v}(i) + log S0(v | i, prefix), normalized,
// where p^{v} is the belief after extending the prefix with v.
std::vector<double> distractor_step_scores(const SpeakerModel& speaker,
                                           const BeliefState& belief,
                                           std::size_t input_index,
                                           std::span<const TokenId> prefix,
                                           double alpha);

// Same scores from precomputed S0 vectors (one per support member).
std::vector<double> distractor_step_scores(
    const BeliefState& belief,
    std::span<const std::vector<double>> step_logprobs,
    std::size_t input_index, double alpha);

// Incremental beam search ranked by cumulative log S1^D; every hypothesis
// carries its own belief over {context} u distractors.
std::vector<ScoredCandidate> distractor_beam_search(
    const SpeakerModel& speaker, std::span<const TokenId> context,
    const std::vector<Context>& distractors, const DecodeConfig& config);

// Top candidate of distractor_beam_search. `distractors` must be non-empty.
ScoredCandidate pragmatic_decode_distractor(
    const SpeakerModel& speaker, std::span<const TokenId> context,
    const std::vector<Context>& distractors, const DecodeConfig& config);

// Mode dispatcher. Reconstructor mode requires a listener; distractor mode
// with no distractors falls back to base decoding.
ScoredCandidate generate(const SpeakerModel& speaker,
                         const ListenerModel* listener, const InputUnit& input,
                         const std::vector<InputUnit>& distractors,
                         const Linearizer& linearizer,
                         const DecodeConfig& config);

}  // namespace prag

#endif  // PRAG_PRAGMATICS_H_
