#ifndef PRAG_NGRAM_SPEAKER_H_
#define PRAG_NGRAM_SPEAKER_H_

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prag/linearize.h"
#include "prag/speaker.h"

namespace prag {

// Sparse continuation counts for one history.
struct NGramRow {
  std::map<TokenId, std::uint64_t> next;
  std::uint64_t total = 0;

  void add(TokenId id) {
    ++next[id];
    ++total;
  }
  std::uint64_t count(TokenId id) const {
    auto it = next.find(id);
    return it == next.end() ? 0 : it->second;
  }
  bool operator==(const NGramRow&) const = default;
};

struct HistoryHash {
  std::size_t operator()(const std::vector<TokenId>& h) const noexcept;
};

using NGramTable =
    std::unordered_map<std::vector<TokenId>, NGramRow, HistoryHash>;

struct TrainingPair {
  Context context;
  TokenSequence output;
};

// Add-k smoothed n-gram speaker over the stream [context ; BOS ; prefix],
// made input-aware by naive-Bayes feature evidence.
//
// Each history h is the last order-1 tokens of that stream. A feature is a
// distinct non-reserved token of a context. Besides the context-free table
// the model keeps, per feature f, the same counts restricted to training
// pairs whose context carries f. A query combines them as
//
//   P(v | c, h) ∝ P_k(v | h) * prod_{f in F(c)}  P(f | v, h) / P(f | h)
//                            * prod_{f notin F(c)} P(!f | v, h) / P(!f | h)
//
// where P_k is the add-k estimate and the presence probabilities shrink
// towards their parent with strength g = k |V|:
//
//   P(f)       = pairs with f / pairs
//   P(f | h)   = (count_f(h) + g P(f)) / (count(h) + g)
//   P(f | v,h) = (count_f(h, v) + g P(f | h)) / (count(h, v) + g)
//
// Features never absent in training carry no evidence when absent. With no
// feature evidence (unseen history, or every pair sharing the query's
// features) the model is exactly the add-k n-gram. Only positions after BOS
// (output tokens and the final EOS) are counted.
class NGramSpeaker : public SpeakerModel {
 public:
  NGramSpeaker(Vocabulary vocab, int order, double k, NGramTable counts,
               std::map<TokenId, NGramTable> feature_counts);

  std::size_t vocab_size() const override { return vocab_.size(); }
  std::vector<double> next_token_logprobs(
      std::span<const TokenId> context,
      std::span<const TokenId> prefix) const override;

  const Vocabulary& vocab() const { return vocab_; }
  int order() const { return order_; }
  double k() const { return k_; }
  const NGramTable& counts() const { return counts_; }
  const std::map<TokenId, NGramTable>& feature_counts() const {
    return feature_counts_;
  }

  // Last order-1 tokens of [context ; BOS ; prefix].
  std::vector<TokenId> history(std::span<const TokenId> context,
                               std::span<const TokenId> prefix) const;

 private:
  Vocabulary vocab_;
  int order_;
  double k_;
  NGramTable counts_;
  std::map<TokenId, NGramTable> feature_counts_;
  std::vector<std::pair<TokenId, double>> feature_priors_;
};

// Distinct non-reserved tokens (not BOS, EOS or SEP) of a context, sorted.
std::vector<TokenId> context_features(std::span<const TokenId> context);

// Throws kInvalidArgument for an empty corpus, order < 2 or k <= 0.
NGramSpeaker train_ngram_speaker(const Vocabulary& vocab,
                                 std::span<const TrainingPair> corpus,
                                 int order, double k);

// Convenience overload linearizing each input first.
NGramSpeaker train_ngram_speaker(
    const Linearizer& linearizer,
    std::span<const std::pair<InputUnit, TokenSequence>> corpus, int order,
    double k);

inline constexpr int kDefaultSpeakerOrder = 3;
inline constexpr double kDefaultSpeakerK = 0.1;

}  // namespace prag

#endif  // PRAG_NGRAM_SPEAKER_H_
