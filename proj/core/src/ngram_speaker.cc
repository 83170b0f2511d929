#include "prag/ngram_speaker.h"

#include <algorithm>
#include <cmath>

#include "prag/error.h"
#include "prag/numeric.h"

namespace prag {

std::size_t HistoryHash::operator()(
    const std::vector<TokenId>& h) const noexcept {
  std::uint64_t x = 0x9e3779b97f4a7c15ull ^ h.size();
  for (TokenId id : h) {
    x ^= id + 0x9e3779b97f4a7c15ull + (x << 6) + (x >> 2);
  }
  return static_cast<std::size_t>(x);
}

std::vector<TokenId> context_features(std::span<const TokenId> context) {
  std::vector<TokenId> f;
  for (TokenId id : context) {
    if (id != kBos && id != kEos && id != kSep) f.push_back(id);
  }
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

NGramSpeaker::NGramSpeaker(Vocabulary vocab, int order, double k,
                           NGramTable counts,
                           std::map<TokenId, NGramTable> feature_counts)
    : vocab_(std::move(vocab)),
      order_(order),
      k_(k),
      counts_(std::move(counts)),
      feature_counts_(std::move(feature_counts)) {
  if (order_ < 2) throw_invalid_argument("n-gram order must be >= 2");
  if (!(k_ > 0.0)) throw_invalid_argument("smoothing constant k must be > 0");

  // Every training pair contributes exactly one position right after BOS.
  auto pairs_in = [](const NGramTable& table) {
    std::uint64_t n = 0;
    for (const auto& [h, row] : table) {
      if (!h.empty() && h.back() == kBos) n += row.total;
    }
    return n;
  };
  const std::uint64_t pairs = pairs_in(counts_);
  for (const auto& [f, table] : feature_counts_) {
    if (pairs == 0) throw_invalid_argument("feature counts without pairs");
    const double prior = static_cast<double>(pairs_in(table)) /
                         static_cast<double>(pairs);
    if (!(prior > 0.0) || prior > 1.0) {
      throw_invalid_argument("feature counts inconsistent with n-gram counts");
    }
    feature_priors_.emplace_back(f, prior);
  }
}

std::vector<TokenId> NGramSpeaker::history(
    std::span<const TokenId> context, std::span<const TokenId> prefix) const {
  const std::size_t want = static_cast<std::size_t>(order_ - 1);
  std::vector<TokenId> h;
  h.reserve(want);
  // Walk the virtual stream [context ; BOS ; prefix] from its end.
  std::size_t from_prefix = std::min(want, prefix.size());
  std::size_t rest = want - from_prefix;
  std::size_t from_bos = std::min<std::size_t>(rest, 1);
  rest -= from_bos;
  std::size_t from_context = std::min(rest, context.size());
  h.insert(h.end(), context.end() - from_context, context.end());
  if (from_bos) h.push_back(kBos);
  h.insert(h.end(), prefix.end() - from_prefix, prefix.end());
  return h;
}

std::vector<double> NGramSpeaker::next_token_logprobs(
    std::span<const TokenId> context, std::span<const TokenId> prefix) const {
  const std::size_t n = vocab_.size();
  const double kv = k_ * static_cast<double>(n);
  const auto h = history(context, prefix);

  auto it = counts_.find(h);
  if (it == counts_.end()) {
    return std::vector<double>(n, -std::log(static_cast<double>(n)));
  }
  const NGramRow& row = it->second;
  const double denom = static_cast<double>(row.total) + kv;
  std::vector<double> lp(n, std::log(k_ / denom));
  for (const auto& [id, c] : row.next) {
    lp[id] = std::log((static_cast<double>(c) + k_) / denom);
  }

  // Feature evidence only moves tokens already seen after h; for the rest
  // the shrunk estimate of P(f | v, h) equals P(f | h) and the factor is 1.
  const auto present = context_features(context);
  const double gamma = kv;
  for (const auto& [f, prior] : feature_priors_) {
    const bool has = std::binary_search(present.begin(), present.end(), f);
    if (!has && prior >= 1.0) continue;
    const auto& table = feature_counts_.at(f);
    auto fit = table.find(h);
    const NGramRow* frow = fit == table.end() ? nullptr : &fit->second;
    const double fh = frow ? static_cast<double>(frow->total) : 0.0;
    const double p_h =
        (fh + gamma * prior) / (static_cast<double>(row.total) + gamma);
    for (const auto& [id, c] : row.next) {
      const double fv = frow ? static_cast<double>(frow->count(id)) : 0.0;
      const double p_v = (fv + gamma * p_h) / (static_cast<double>(c) + gamma);
      lp[id] += has ? std::log(p_v / p_h) : std::log((1.0 - p_v) / (1.0 - p_h));
    }
  }
  return log_normalize_log(lp);
}

namespace {

void count_pair(int order, const TrainingPair& pair, NGramTable& global,
                std::map<TokenId, NGramTable>& features) {
  std::vector<TokenId> stream(pair.context.begin(), pair.context.end());
  stream.push_back(kBos);
  const std::size_t first = stream.size();
  stream.insert(stream.end(), pair.output.ids.begin(), pair.output.ids.end());
  if (!pair.output.terminated()) stream.push_back(kEos);

  const auto feats = context_features(pair.context);
  const std::size_t want = static_cast<std::size_t>(order - 1);
  for (std::size_t p = first; p < stream.size(); ++p) {
    const std::size_t start = p >= want ? p - want : 0;
    std::vector<TokenId> h(stream.begin() + start, stream.begin() + p);
    global[h].add(stream[p]);
    for (TokenId f : feats) features[f][h].add(stream[p]);
  }
}

}  // namespace

NGramSpeaker train_ngram_speaker(const Vocabulary& vocab,
                                 std::span<const TrainingPair> corpus,
                                 int order, double k) {
  if (corpus.empty()) throw_invalid_argument("empty training corpus");
  if (order < 2) throw_invalid_argument("n-gram order must be >= 2");
  if (!(k > 0.0)) throw_invalid_argument("smoothing constant k must be > 0");
  NGramTable global;
  std::map<TokenId, NGramTable> features;
  for (const auto& pair : corpus) {
    validate_sequence(pair.output, vocab.size());
    for (TokenId id : pair.context) {
      if (id >= vocab.size()) throw_invalid_argument("context id out of range");
    }
    count_pair(order, pair, global, features);
  }
  return NGramSpeaker(vocab, order, k, std::move(global), std::move(features));
}

NGramSpeaker train_ngram_speaker(
    const Linearizer& linearizer,
    std::span<const std::pair<InputUnit, TokenSequence>> corpus, int order,
    double k) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(corpus.size());
  for (const auto& [input, output] : corpus) {
    pairs.push_back({linearizer(input), output});
  }
  return train_ngram_speaker(linearizer.vocab(), pairs, order, k);
}

}  // namespace prag
