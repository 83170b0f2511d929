#ifndef PRAG_SPEAKER_H_
#define PRAG_SPEAKER_H_

#include <memory>
#include <span>
#include <vector>

#include "prag/vocabulary.h"

namespace prag {

// Base speaker S0: incremental next-token distributions conditioned on an
// input context and the generated prefix.
//
// Implementations are immutable after construction and must be safe to call
// concurrently. next_token_logprobs returns one entry per vocabulary id and
// its exponentials sum to 1 (within 1e-9). EOS is an ordinary entry.
class SpeakerModel {
 public:
  virtual ~SpeakerModel() = default;

  virtual std::size_t vocab_size() const = 0;

  virtual std::vector<double> next_token_logprobs(
      std::span<const TokenId> context,
      std::span<const TokenId> prefix) const = 0;
};

using SpeakerPtr = std::shared_ptr<const SpeakerModel>;

// Chain-rule log-probability of an EOS-terminated output, EOS step included.
// Throws kInvalidArgument for unterminated output.
double sequence_logprob(const SpeakerModel& speaker,
                        std::span<const TokenId> context,
                        const TokenSequence& output);

// w * a + (1 - w) * b; w must lie in [0, 1].
double ensemble_logprob(double a_logprob, double b_logprob, double w);

// Two-member log-linear interpolation, renormalized over the vocabulary.
class EnsembleSpeaker : public SpeakerModel {
 public:
  EnsembleSpeaker(SpeakerPtr a, SpeakerPtr b, double w);

  std::size_t vocab_size() const override { return a_->vocab_size(); }
  std::vector<double> next_token_logprobs(
      std::span<const TokenId> context,
      std::span<const TokenId> prefix) const override;

  double weight() const { return w_; }

 private:
  SpeakerPtr a_;
  SpeakerPtr b_;
  double w_;
};

}  // namespace prag

#endif  // PRAG_SPEAKER_H_
