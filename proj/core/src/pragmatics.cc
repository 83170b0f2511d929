#include "prag/pragmatics.h"

#include <algorithm>
#include <cmath>

#include "prag/error.h"
#include "prag/numeric.h"

namespace prag {

std::string_view to_string(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::kBase:
      return "base";
    case DecodeMode::kReconstructor:
      return "reconstructor";
    case DecodeMode::kDistractor:
      return "distractor";
  }
  return "base";
}

DecodeMode parse_decode_mode(std::string_view s) {
  if (s == "base") return DecodeMode::kBase;
  if (s == "reconstructor") return DecodeMode::kReconstructor;
  if (s == "distractor") return DecodeMode::kDistractor;
  throw_invalid_argument("unknown decode mode '" + std::string(s) + "'");
}

void DecodeConfig::validate() const {
  if (beam_size < 1) throw_invalid_argument("beam_size must be >= 1");
  if (max_len < 1) throw_invalid_argument("max_len must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw_invalid_argument("lambda must lie in [0, 1]");
  }
  if (!(alpha >= 0.0) || std::isinf(alpha)) {
    throw_invalid_argument("alpha must be a finite value >= 0");
  }
}

DecodeConfig DecodeConfig::meaning_representation_preset() {
  DecodeConfig c;
  c.beam_size = 10;
  c.lambda = 0.4;
  c.alpha = 0.2;
  return c;
}

DecodeConfig DecodeConfig::summarization_preset() {
  DecodeConfig c;
  c.beam_size = 20;
  c.lambda = 0.9;
  c.alpha = 1.0;
  return c;
}

bool ranks_before(double score_a, double base_a, std::span<const TokenId> a,
                  double score_b, double base_b, std::span<const TokenId> b) {
  if (score_a != score_b) return score_a > score_b;
  if (base_a != base_b) return base_a > base_b;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

BeliefState BeliefState::uniform(std::vector<Context> support) {
  return uniform(std::make_shared<const std::vector<Context>>(
      std::move(support)));
}

BeliefState BeliefState::uniform(
    std::shared_ptr<const std::vector<Context>> s) {
  if (!s || s->size() < 2) {
    throw_invalid_argument("belief support needs the input and a distractor");
  }
  BeliefState b;
  b.log_beliefs.assign(s->size(), -std::log(static_cast<double>(s->size())));
  b.support = std::move(s);
  return b;
}

std::vector<double> BeliefState::probabilities() const {
  std::vector<double> p(log_beliefs.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::exp(log_beliefs[j]);
  return p;
}

namespace {

std::vector<std::vector<double>> support_step_logprobs(
    const SpeakerModel& speaker, const BeliefState& belief,
    std::span<const TokenId> prefix) {
  std::vector<std::vector<double>> out;
  out.reserve(belief.support->size());
  for (const auto& ctx : *belief.support) {
    out.push_back(speaker.next_token_logprobs(ctx, prefix));
  }
  return out;
}

// One beam entry. `belief` is unused by base beam search.
struct Node {
  std::vector<TokenId> ids;
  double score = 0.0;
  double base = 0.0;
  BeliefState belief;
};

struct Expansion {
  std::size_t parent;
  TokenId token;
  double score;
  double base;
};

bool expansion_before(const Expansion& x, const Expansion& y,
                      const std::vector<Node>& nodes) {
  if (x.score != y.score) return x.score > y.score;
  if (x.base != y.base) return x.base > y.base;
  const auto& px = nodes[x.parent].ids;
  const auto& py = nodes[y.parent].ids;
  // Both children have equal length; compare parent prefixes then tokens.
  auto [ix, iy] = std::mismatch(px.begin(), px.end(), py.begin());
  if (ix != px.end()) return *ix < *iy;
  return x.token < y.token;
}

bool node_before(const Node& a, const Node& b) {
  return ranks_before(a.score, a.base, a.ids, b.score, b.base, b.ids);
}

// Shared beam loop. `score_step(node, scores, bases, cache)` fills per-token
// increments for `node`; `make_child(parent, cache, token)` builds the
// child's belief.
template <class ScoreStep, class MakeBelief>
std::vector<Node> run_beam(std::size_t vocab_size, const DecodeConfig& config,
                           Node root, ScoreStep score_step,
                           MakeBelief make_belief) {
  config.validate();
  const std::size_t beam = static_cast<std::size_t>(config.beam_size);
  std::vector<Node> active{std::move(root)};
  std::vector<Node> finished;

  for (int step = 0; step < config.max_len && !active.empty(); ++step) {
    std::vector<Expansion> expansions;
    expansions.reserve(active.size() * vocab_size);
    std::vector<std::vector<std::vector<double>>> caches(active.size());
    std::vector<double> scores;
    std::vector<double> bases;
    for (std::size_t p = 0; p < active.size(); ++p) {
      score_step(active[p], scores, bases, caches[p]);
      for (std::size_t v = 0; v < vocab_size; ++v) {
        expansions.push_back({p, static_cast<TokenId>(v),
                              active[p].score + scores[v],
                              active[p].base + bases[v]});
      }
    }
    const std::size_t keep = std::min(beam, expansions.size());
    std::partial_sort(expansions.begin(), expansions.begin() + keep,
                      expansions.end(),
                      [&](const Expansion& x, const Expansion& y) {
                        return expansion_before(x, y, active);
                      });

    std::vector<Node> next;
    for (std::size_t e = 0; e < keep; ++e) {
      const auto& x = expansions[e];
      const Node& parent = active[x.parent];
      Node child;
      child.ids = parent.ids;
      child.ids.push_back(x.token);
      child.score = x.score;
      child.base = x.base;
      const bool done = x.token == kEos ||
                        static_cast<int>(child.ids.size()) >= config.max_len;
      if (!done) child.belief = make_belief(parent, caches[x.parent], x.token);
      (done ? finished : next).push_back(std::move(child));
    }
    active = std::move(next);

    // Step increments are log-probabilities (<= 0), so no active hypothesis
    // can overtake a full list of strictly better finished ones.
    if (finished.size() >= beam && !active.empty()) {
      std::sort(finished.begin(), finished.end(), node_before);
      finished.resize(beam);
      double best_active = active.front().score;
      for (const auto& n : active) best_active = std::max(best_active, n.score);
      if (finished.back().score > best_active) active.clear();
    }
  }
  for (auto& n : active) finished.push_back(std::move(n));
  std::sort(finished.begin(), finished.end(), node_before);
  if (finished.size() > beam) finished.resize(beam);
  return finished;
}

}  // namespace

std::vector<ScoredCandidate> beam_search(const SpeakerModel& speaker,
                                         std::span<const TokenId> context,
                                         const DecodeConfig& config) {
  auto score_step = [&](const Node& node, std::vector<double>& scores,
                        std::vector<double>& bases,
                        std::vector<std::vector<double>>&) {
    bases = speaker.next_token_logprobs(context, node.ids);
    scores = bases;
  };
  auto no_belief = [](const Node&, const std::vector<std::vector<double>>&,
                      TokenId) { return BeliefState{}; };
  auto nodes =
      run_beam(speaker.vocab_size(), config, Node{}, score_step, no_belief);
  std::vector<ScoredCandidate> out;
  out.reserve(nodes.size());
  for (auto& n : nodes) {
    out.push_back({TokenSequence{std::move(n.ids)}, n.base, {}, {}, {}});
  }
  return out;
}

std::vector<ScoredCandidate> rerank_reconstructor(
    const InputUnit& input, std::vector<ScoredCandidate> candidates,
    const ListenerModel& listener, double lambda) {
  if (candidates.empty()) throw_invalid_argument("no candidates to rerank");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw_invalid_argument("lambda must lie in [0, 1]");
  }
  for (auto& c : candidates) {
    const double l = listener.reconstruction_logprob(input, c.output.ids);
    c.listener_logprob = l;
    if (lambda == 0.0) {
      c.combined_score = c.base_logprob;
    } else if (lambda == 1.0) {
      c.combined_score = l;
    } else {
      c.combined_score = lambda * l + (1.0 - lambda) * c.base_logprob;
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ScoredCandidate& a, const ScoredCandidate& b) {
                     return ranks_before(*a.combined_score, a.base_logprob,
                                         a.output.ids, *b.combined_score,
                                         b.base_logprob, b.output.ids);
                   });
  return candidates;
}

BeliefState belief_update(const BeliefState& belief,
                          std::span<const std::vector<double>> step_logprobs,
                          TokenId token) {
  const std::size_t m = belief.log_beliefs.size();
  if (step_logprobs.size() != m) {
    throw_invalid_argument("one step distribution per support member");
  }
  std::vector<double> joint(m);
  for (std::size_t j = 0; j < m; ++j) {
    joint[j] = step_logprobs[j][token] + belief.log_beliefs[j];
  }
  if (log_sum_exp(joint) == kNegInf) {
    throw_failed_precondition("belief collapse");
  }
  BeliefState next;
  next.support = belief.support;
  next.log_beliefs = log_normalize_log(joint);
  return next;
}

BeliefState belief_update(const BeliefState& belief,
                          const SpeakerModel& speaker,
                          std::span<const TokenId> prefix, TokenId token) {
  if (!belief.support || belief.support->size() != belief.log_beliefs.size()) {
    throw_invalid_argument("malformed belief state");
  }
  const auto steps = support_step_logprobs(speaker, belief, prefix);
  return belief_update(belief, steps, token);
}

std::vector<double> distractor_step_scores(
    const BeliefState& belief,
    std::span<const std::vector<double>> step_logprobs,
    std::size_t input_index, double alpha) {
  const std::size_t m = belief.log_beliefs.size();
  if (input_index >= m || step_logprobs.size() != m) {
    throw_invalid_argument("input index outside the belief support");
  }
  const auto& own = step_logprobs[input_index];
  if (alpha == 0.0) return own;
  std::vector<double> scores(own.size());
  std::vector<double> joint(m);
  for (std::size_t v = 0; v < own.size(); ++v) {
    for (std::size_t j = 0; j < m; ++j) {
      joint[j] = step_logprobs[j][v] + belief.log_beliefs[j];
    }
    const double z = log_sum_exp(joint);
    if (z == kNegInf || own[v] == kNegInf) {
      scores[v] = kNegInf;
      continue;
    }
    scores[v] = alpha * (joint[input_index] - z) + own[v];
  }
  return log_normalize_log(scores);
}

std::vector<double> distractor_step_scores(const SpeakerModel& speaker,
                                           const BeliefState& belief,
                                           std::size_t input_index,
                                           std::span<const TokenId> prefix,
                                           double alpha) {
  const auto steps = support_step_logprobs(speaker, belief, prefix);
  return distractor_step_scores(belief, steps, input_index, alpha);
}

std::vector<ScoredCandidate> distractor_beam_search(
    const SpeakerModel& speaker, std::span<const TokenId> context,
    const std::vector<Context>& distractors, const DecodeConfig& config) {
  if (distractors.empty()) {
    throw_invalid_argument("distractor decoding needs at least one distractor");
  }
  std::vector<Context> support;
  support.emplace_back(context.begin(), context.end());
  support.insert(support.end(), distractors.begin(), distractors.end());
  Node root;
  root.belief = BeliefState::uniform(std::move(support));

  auto score_step = [&](const Node& node, std::vector<double>& scores,
                        std::vector<double>& bases,
                        std::vector<std::vector<double>>& cache) {
    cache = support_step_logprobs(speaker, node.belief, node.ids);
    scores = distractor_step_scores(node.belief, cache, 0, config.alpha);
    bases = cache[0];
  };
  auto make_belief = [](const Node& parent,
                        const std::vector<std::vector<double>>& cache,
                        TokenId token) {
    return belief_update(parent.belief, cache, token);
  };
  auto nodes = run_beam(speaker.vocab_size(), config, std::move(root),
                        score_step, make_belief);
  std::vector<ScoredCandidate> out;
  out.reserve(nodes.size());
  for (auto& n : nodes) {
    out.push_back({TokenSequence{std::move(n.ids)}, n.base, {}, {}, n.score});
  }
  return out;
}

ScoredCandidate pragmatic_decode_distractor(
    const SpeakerModel& speaker, std::span<const TokenId> context,
    const std::vector<Context>& distractors, const DecodeConfig& config) {
  auto ranked = distractor_beam_search(speaker, context, distractors, config);
  return std::move(ranked.front());
}

ScoredCandidate generate(const SpeakerModel& speaker,
                         const ListenerModel* listener, const InputUnit& input,
                         const std::vector<InputUnit>& distractors,
                         const Linearizer& linearizer,
                         const DecodeConfig& config) {
  config.validate();
  const Context context = linearizer(input);
  switch (config.mode) {
    case DecodeMode::kBase:
      break;
    case DecodeMode::kReconstructor: {
      if (listener == nullptr) {
        throw_invalid_argument("reconstructor mode needs a listener");
      }
      auto ranked = rerank_reconstructor(
          input, beam_search(speaker, context, config), *listener,
          config.lambda);
      return std::move(ranked.front());
    }
    case DecodeMode::kDistractor: {
      if (distractors.empty()) break;
      std::vector<Context> contexts;
      for (const auto& d : distractors) contexts.push_back(linearizer(d));
      return pragmatic_decode_distractor(speaker, context, contexts, config);
    }
  }
  return std::move(beam_search(speaker, context, config).front());
}

}  // namespace prag
