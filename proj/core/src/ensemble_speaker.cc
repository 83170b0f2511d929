#include "prag/error.h"
#include "prag/numeric.h"
#include "prag/speaker.h"

namespace prag {

double sequence_logprob(const SpeakerModel& speaker,
                        std::span<const TokenId> context,
                        const TokenSequence& output) {
  if (!output.terminated()) {
    throw_invalid_argument("sequence_logprob needs an EOS-terminated output");
  }
  double total = 0.0;
  std::span<const TokenId> ids(output.ids);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    total += speaker.next_token_logprobs(context, ids.first(t))[ids[t]];
  }
  return total;
}

double ensemble_logprob(double a_logprob, double b_logprob, double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw_invalid_argument("ensemble weight must lie in [0, 1]");
  }
  return w * a_logprob + (1.0 - w) * b_logprob;
}

EnsembleSpeaker::EnsembleSpeaker(SpeakerPtr a, SpeakerPtr b, double w)
    : a_(std::move(a)), b_(std::move(b)), w_(w) {
  if (!a_ || !b_) throw_invalid_argument("ensemble member is null");
  if (!(w_ >= 0.0 && w_ <= 1.0)) {
    throw_invalid_argument("ensemble weight must lie in [0, 1]");
  }
  if (a_->vocab_size() != b_->vocab_size()) {
    throw_invalid_argument("ensemble members disagree on vocabulary size");
  }
}

std::vector<double> EnsembleSpeaker::next_token_logprobs(
    std::span<const TokenId> context, std::span<const TokenId> prefix) const {
  // Degenerate weights return the member unchanged (avoids 0 * -inf).
  if (w_ == 1.0) return a_->next_token_logprobs(context, prefix);
  if (w_ == 0.0) return b_->next_token_logprobs(context, prefix);
  auto la = a_->next_token_logprobs(context, prefix);
  const auto lb = b_->next_token_logprobs(context, prefix);
  for (std::size_t v = 0; v < la.size(); ++v) {
    la[v] = ensemble_logprob(la[v], lb[v], w_);
  }
  return log_normalize_log(la);
}

}  // namespace prag
