#include "prag/listener.h"

#include <cmath>

#include "prag/error.h"
#include "prag/numeric.h"

namespace prag {

std::vector<std::string> attribute_classes(const Attribute& attribute) {
  std::vector<std::string> classes;
  if (attribute.kind == AttributeKind::kDelexicalized) {
    classes.emplace_back(kPresentClass);
  } else {
    classes = attribute.values;
  }
  classes.emplace_back(kAbsentClass);
  return classes;
}

std::string attribute_class(const Attribute& attribute,
                            const MeaningRepresentation& mr) {
  auto v = mr.get(attribute.name);
  if (!v) return std::string(kAbsentClass);
  if (!attribute.has_value(*v)) {
    throw_invalid_argument("value '" + *v + "' not allowed for '" +
                           attribute.name + "'");
  }
  if (attribute.kind == AttributeKind::kDelexicalized) {
    return std::string(kPresentClass);
  }
  return *v;
}

namespace {

std::size_t class_index(const std::vector<std::string>& classes,
                        const std::string& label) {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return i;
  }
  throw_invalid_argument("unknown class '" + label + "'");
}

bool is_evidence(TokenId id) {
  return id != kBos && id != kEos && id != kSep;
}

}  // namespace

AttributeClassifierListener::AttributeClassifierListener(
    AttributeSchema schema, Vocabulary vocab, double k)
    : schema_(std::move(schema)), vocab_(std::move(vocab)), k_(k) {
  for (const auto& a : schema_.attributes()) {
    AttributeStats s;
    s.classes = attribute_classes(a);
    s.class_counts.assign(s.classes.size(), 0);
    s.token_counts.resize(s.classes.size());
    s.token_totals.assign(s.classes.size(), 0);
    stats_.push_back(std::move(s));
  }
  finalize();
}

AttributeClassifierListener::AttributeClassifierListener(
    AttributeSchema schema, Vocabulary vocab, double k,
    std::vector<AttributeStats> stats)
    : schema_(std::move(schema)),
      vocab_(std::move(vocab)),
      k_(k),
      stats_(std::move(stats)) {
  finalize();
}

void AttributeClassifierListener::finalize() {
  if (!(k_ > 0.0)) throw_invalid_argument("smoothing constant k must be > 0");
  if (stats_.size() != schema_.size()) {
    throw_invalid_argument("listener statistics do not match the schema");
  }
  for (std::size_t a = 0; a < stats_.size(); ++a) {
    const auto& s = stats_[a];
    if (s.classes != attribute_classes(schema_.attributes()[a]) ||
        s.class_counts.size() != s.classes.size() ||
        s.token_counts.size() != s.classes.size() ||
        s.token_totals.size() != s.classes.size()) {
      throw_invalid_argument("listener classes do not match attribute '" +
                             schema_.attributes()[a].name + "'");
    }
  }
  background_.assign(vocab_.size(), 0);
  background_total_ = 0;
  if (!stats_.empty()) {
    for (const auto& per_class : stats_.front().token_counts) {
      for (const auto& [t, c] : per_class) {
        if (t >= vocab_.size()) {
          throw_invalid_argument("listener token id out of range");
        }
        background_[t] += c;
        background_total_ += c;
      }
    }
  }
  seen_types_ = 0;
  for (auto c : background_) seen_types_ += c > 0;
}

std::vector<double> AttributeClassifierListener::attribute_log_posterior(
    std::size_t index, std::span<const TokenId> output) const {
  const auto& s = stats_.at(index);
  const std::size_t m = s.classes.size();
  std::uint64_t n = 0;
  for (auto c : s.class_counts) n += c;

  std::vector<double> score(m);
  for (std::size_t c = 0; c < m; ++c) {
    score[c] = std::log((static_cast<double>(s.class_counts[c]) + k_) /
                        (static_cast<double>(n) + k_ * m));
  }
  const double mass = k_ * static_cast<double>(seen_types_);
  for (TokenId t : output) {
    if (!is_evidence(t) || t >= background_.size() || background_[t] == 0) {
      continue;
    }
    const double bg = static_cast<double>(background_[t]) /
                      static_cast<double>(background_total_);
    for (std::size_t c = 0; c < m; ++c) {
      auto it = s.token_counts[c].find(t);
      const double nt =
          it == s.token_counts[c].end() ? 0.0 : static_cast<double>(it->second);
      score[c] += std::log((nt + mass * bg) /
                           (static_cast<double>(s.token_totals[c]) + mass));
    }
  }
  return log_normalize_log(score);
}

std::vector<std::vector<double>> AttributeClassifierListener::
    attribute_posteriors(std::span<const TokenId> output) const {
  std::vector<std::vector<double>> out;
  for (std::size_t a = 0; a < stats_.size(); ++a) {
    auto lp = attribute_log_posterior(a, output);
    for (auto& x : lp) x = std::exp(x);
    out.push_back(std::move(lp));
  }
  return out;
}

double AttributeClassifierListener::mr_logprob(
    const MeaningRepresentation& mr, std::span<const TokenId> output) const {
  validate_mr(mr, schema_);
  double total = 0.0;
  for (std::size_t a = 0; a < stats_.size(); ++a) {
    const auto label = attribute_class(schema_.attributes()[a], mr);
    total += attribute_log_posterior(a, output)[class_index(
        stats_[a].classes, label)];
  }
  return total;
}

double AttributeClassifierListener::reconstruction_logprob(
    const InputUnit& input, std::span<const TokenId> output) const {
  const auto* mr = std::get_if<MeaningRepresentation>(&input);
  if (mr == nullptr) {
    throw_invalid_argument("attribute listener needs an MR input");
  }
  return mr_logprob(*mr, output);
}

AttributeClassifierListener train_attribute_listener(
    std::span<const std::pair<MeaningRepresentation, TokenSequence>> corpus,
    const AttributeSchema& schema, const Vocabulary& vocab, double k) {
  if (corpus.empty()) throw_invalid_argument("empty training corpus");
  if (!(k > 0.0)) throw_invalid_argument("smoothing constant k must be > 0");
  AttributeClassifierListener blank(schema, vocab, k);
  auto stats = blank.stats();
  for (const auto& [mr, text] : corpus) {
    validate_mr(mr, schema);
    validate_sequence(text, vocab.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
      auto& s = stats[a];
      const auto c =
          class_index(s.classes, attribute_class(schema.attributes()[a], mr));
      ++s.class_counts[c];
      for (TokenId t : text.ids) {
        if (!is_evidence(t)) continue;
        ++s.token_counts[c][t];
        ++s.token_totals[c];
      }
    }
  }
  return AttributeClassifierListener(schema, vocab, k, std::move(stats));
}

ReverseSpeakerListener::ReverseSpeakerListener(SpeakerPtr reverse_speaker,
                                               AttributeSchema schema,
                                               Vocabulary vocab)
    : reverse_(std::move(reverse_speaker)),
      schema_(std::move(schema)),
      vocab_(std::move(vocab)) {
  if (!reverse_) throw_invalid_argument("reverse speaker is null");
  if (reverse_->vocab_size() != vocab_.size()) {
    throw_invalid_argument("reverse speaker vocabulary size mismatch");
  }
}

TokenSequence ReverseSpeakerListener::target(const InputUnit& input) const {
  TokenSequence seq{Linearizer(schema_, vocab_)(input)};
  seq.ids.push_back(kEos);
  return seq;
}

double ReverseSpeakerListener::reconstruction_logprob(
    const InputUnit& input, std::span<const TokenId> output) const {
  const auto context = linearize_tokens(
      TokenSequence{std::vector<TokenId>(output.begin(), output.end())});
  return sequence_logprob(*reverse_, context, target(input));
}

NGramSpeaker train_reverse_speaker(
    const Linearizer& linearizer,
    std::span<const std::pair<InputUnit, TokenSequence>> corpus, int order,
    double k) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(corpus.size());
  for (const auto& [input, output] : corpus) {
    pairs.push_back({linearize_tokens(output), TokenSequence{linearizer(input)}});
  }
  return train_ngram_speaker(linearizer.vocab(), pairs, order, k);
}

}  // namespace prag
