#ifndef PRAG_LISTENER_H_
#define PRAG_LISTENER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "prag/linearize.h"
#include "prag/ngram_speaker.h"
#include "prag/schema.h"
#include "prag/speaker.h"

namespace prag {

// Reconstructor listener L^R(i | o). Values are <= 0, deterministic, and
// implementations are immutable and thread-safe.
class ListenerModel {
 public:
  virtual ~ListenerModel() = default;

  virtual double reconstruction_logprob(
      const InputUnit& input, std::span<const TokenId> output) const = 0;
};

using ListenerPtr = std::shared_ptr<const ListenerModel>;

inline constexpr std::string_view kAbsentClass = "<absent>";
inline constexpr std::string_view kPresentClass = "<present>";

// Class set of one attribute: its values plus ABSENT, or {PRESENT, ABSENT}
// for delexicalized attributes.
std::vector<std::string> attribute_classes(const Attribute& attribute);

// Class label of `attribute` under `mr`.
std::string attribute_class(const Attribute& attribute,
                            const MeaningRepresentation& mr);

// One multinomial naive-Bayes classifier per schema attribute over the
// bag of output tokens.
//
// Class priors are add-k smoothed. Token likelihoods are add-k smoothed
// with the pseudo-count mass k|V'| spread by the corpus-wide token
// distribution, where V' is the set of tokens seen in training:
//
//   P(t | c) = (n_c(t) + k |V'| P_bg(t)) / (n_c + k |V'|)
//
// Tokens outside V' carry no evidence and are skipped.
class AttributeClassifierListener : public ListenerModel {
 public:
  struct AttributeStats {
    std::vector<std::string> classes;
    std::vector<std::uint64_t> class_counts;
    // Per class: token -> count, and the class token total.
    std::vector<std::map<TokenId, std::uint64_t>> token_counts;
    std::vector<std::uint64_t> token_totals;
  };

  // Untrained listener: uniform priors, no token evidence.
  AttributeClassifierListener(AttributeSchema schema, Vocabulary vocab,
                              double k);
  AttributeClassifierListener(AttributeSchema schema, Vocabulary vocab,
                              double k, std::vector<AttributeStats> stats);

  double reconstruction_logprob(
      const InputUnit& input, std::span<const TokenId> output) const override;

  // Joint log-probability of the complete class assignment implied by `mr`.
  double mr_logprob(const MeaningRepresentation& mr,
                    std::span<const TokenId> output) const;

  // Log-posterior over the classes of attribute `index`.
  std::vector<double> attribute_log_posterior(
      std::size_t index, std::span<const TokenId> output) const;

  // Probability vectors, one per schema attribute.
  std::vector<std::vector<double>> attribute_posteriors(
      std::span<const TokenId> output) const;

  const AttributeSchema& schema() const { return schema_; }
  const Vocabulary& vocab() const { return vocab_; }
  double k() const { return k_; }
  const std::vector<AttributeStats>& stats() const { return stats_; }

 private:
  void finalize();

  AttributeSchema schema_;
  Vocabulary vocab_;
  double k_;
  std::vector<AttributeStats> stats_;
  // Corpus-wide token counts (identical for every attribute).
  std::vector<std::uint64_t> background_;
  std::uint64_t background_total_ = 0;
  std::size_t seen_types_ = 0;
};

// Throws kInvalidArgument for an empty corpus or k <= 0.
AttributeClassifierListener train_attribute_listener(
    std::span<const std::pair<MeaningRepresentation, TokenSequence>> corpus,
    const AttributeSchema& schema, const Vocabulary& vocab, double k);

inline constexpr double kDefaultListenerK = 0.5;

// Listener backed by a speaker trained in the reverse direction: the output
// text is the context and the linearized input is the generated sequence.
class ReverseSpeakerListener : public ListenerModel {
 public:
  ReverseSpeakerListener(SpeakerPtr reverse_speaker, AttributeSchema schema,
                         Vocabulary vocab);

  double reconstruction_logprob(
      const InputUnit& input, std::span<const TokenId> output) const override;

  const SpeakerModel& speaker() const { return *reverse_; }

  // The sequence the reverse speaker scores: linearized input then EOS.
  TokenSequence target(const InputUnit& input) const;

 private:
  SpeakerPtr reverse_;
  AttributeSchema schema_;
  Vocabulary vocab_;
};

// Trains the reverse n-gram speaker on swapped pairs.
NGramSpeaker train_reverse_speaker(
    const Linearizer& linearizer,
    std::span<const std::pair<InputUnit, TokenSequence>> corpus, int order,
    double k);

// Serialization:
//   {"type":"attribute-nb","k":k,"schema":{...},"vocab":[...],
//    "priors":{attr:{class:count}},
//    "token_counts":{attr:{class:{token:count}}}}
//   {"type":"reverse","model":path,"schema":{...}}
std::string attribute_listener_to_json(const AttributeClassifierListener& l);
AttributeClassifierListener attribute_listener_from_json(
    std::string_view text);
void save_attribute_listener(const AttributeClassifierListener& l,
                             const std::filesystem::path& path);
// Writes the reverse speaker next to `path` and the listener stub at `path`.
void save_reverse_listener(const NGramSpeaker& reverse_speaker,
                           const AttributeSchema& schema,
                           const std::filesystem::path& path);

struct LoadedListener {
  ListenerPtr model;
  Vocabulary vocab;
};

LoadedListener load_listener(const std::filesystem::path& path);

}  // namespace prag

#endif  // PRAG_LISTENER_H_
