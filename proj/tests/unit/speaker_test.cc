#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "prag/error.h"
#include "prag/ngram_speaker.h"
#include "prag/numeric.h"
#include "prag/speaker.h"
#include "prag/speaker_io.h"
#include "prag/synthetic.h"
#include "prag/training.h"
#include "support/test_support.h"

namespace prag {
namespace {

using testing::TempDir;

Vocabulary ab_vocab() { return Vocabulary({"a", "b"}); }

TokenSequence seq(std::vector<TokenId> ids) { return TokenSequence{std::move(ids)}; }

// Independent n-gram count enumeration over [context ; BOS ; output ; EOS],
// positions after BOS only.
std::map<std::vector<TokenId>, std::map<TokenId, std::uint64_t>> enumerate_counts(
    std::span<const TrainingPair> corpus, int order) {
  std::map<std::vector<TokenId>, std::map<TokenId, std::uint64_t>> out;
  for (const auto& p : corpus) {
    std::vector<TokenId> s = p.context;
    s.push_back(kBos);
    const std::size_t first = s.size();
    s.insert(s.end(), p.output.ids.begin(), p.output.ids.end());
    if (!p.output.terminated()) s.push_back(kEos);
    for (std::size_t i = first; i < s.size(); ++i) {
      const std::size_t lo = i >= static_cast<std::size_t>(order - 1) ? i - (order - 1) : 0;
      out[std::vector<TokenId>(s.begin() + lo, s.begin() + i)][s[i]]++;
    }
  }
  return out;
}

struct SmallCorpus {
  AttributeSchema schema = default_e2e_schema();
  std::vector<CorpusRecord> records;
  Vocabulary vocab;
  std::unique_ptr<NGramSpeaker> speaker;

  explicit SmallCorpus(std::size_t n = 300, std::uint64_t seed = 3) {
    for (auto& r : generate_corpus(default_grammar(schema), n, seed)) {
      records.push_back(delexicalize(r, schema));
    }
    vocab = corpus_vocabulary(records, schema);
    Linearizer lin(schema, vocab);
    speaker = std::make_unique<NGramSpeaker>(
        train_ngram_speaker(lin, speaker_pairs(records, vocab), 3, 0.1));
  }
  Context context(std::size_t i) const {
    return linearize_mr(records[i].mr, schema, vocab);
  }
};

const SmallCorpus& small() {
  static const SmallCorpus c;
  return c;
}

TEST(NGramSpeaker, OnePairSeenHistoryFollowsSmoothingFormula) {
  const Vocabulary v = ab_vocab();
  const double k = 0.1;
  const TokenId a = v.id("a");
  // A context carrying a feature exercises the feature tables too.
  const std::vector<TrainingPair> corpus = {{{a, kSep}, seq({a, kEos})}};
  const auto s = train_ngram_speaker(v, corpus, 3, k);
  const auto lp = s.next_token_logprobs(corpus[0].context, {});
  const double n = static_cast<double>(v.size());
  for (TokenId t = 0; t < v.size(); ++t) {
    const double want = (t == a ? 1.0 + k : k) / (1.0 + k * n);
    EXPECT_NEAR(std::exp(lp[t]), want, 1e-12) << "token " << t;
  }
}

TEST(NGramSpeaker, UnseenHistoryIsUniform) {
  const auto& c = small();
  const std::vector<TokenId> prefix = {kUnk, kUnk};
  const auto lp = c.speaker->next_token_logprobs(c.context(0), prefix);
  for (double x : lp) {
    EXPECT_NEAR(x, -std::log(static_cast<double>(c.vocab.size())), 1e-12);
  }
}

TEST(NGramSpeaker, TwoPairBigramTableMatchesHandCounts) {
  const Vocabulary v = ab_vocab();
  const TokenId a = v.id("a"), b = v.id("b");
  const std::vector<TrainingPair> corpus = {{{kSep}, seq({a, b, a, kEos})},
                                            {{kSep}, seq({b, b, kEos})}};
  const double k = 0.5;
  const auto s = train_ngram_speaker(v, corpus, 2, k);
  // Hand counts: BOS->{a:1,b:1}, a->{b:1,EOS:1}, b->{a:1,b:1,EOS:1}.
  const std::map<TokenId, std::map<TokenId, std::uint64_t>> hand = {
      {kBos, {{a, 1}, {b, 1}}}, {a, {{b, 1}, {kEos, 1}}}, {b, {{a, 1}, {b, 1}, {kEos, 1}}}};
  ASSERT_EQ(s.counts().size(), hand.size());
  const double n = static_cast<double>(v.size());
  for (const auto& [h, row] : hand) {
    const auto& got = s.counts().at({h});
    std::uint64_t total = 0;
    for (const auto& [t, c] : row) {
      EXPECT_EQ(got.count(t), c);
      total += c;
    }
    EXPECT_EQ(got.total, total);
    const std::vector<TokenId> prefix =
        h == kBos ? std::vector<TokenId>{} : std::vector<TokenId>{h};
    const auto lp = s.next_token_logprobs(Context{kSep}, prefix);
    for (TokenId t = 0; t < v.size(); ++t) {
      const double c = row.count(t) ? static_cast<double>(row.at(t)) : 0.0;
      EXPECT_NEAR(std::exp(lp[t]), (c + k) / (static_cast<double>(total) + k * n), 1e-12);
    }
  }
}

TEST(NGramSpeaker, CountsMatchEnumerationOnRandomCorpora) {
  std::mt19937_64 rng(9);
  const Vocabulary v({"a", "b", "c", "d"});
  for (int trial = 0; trial < 30; ++trial) {
    const int order = 2 + static_cast<int>(rng() % 3);
    std::vector<TrainingPair> corpus;
    for (int p = 0; p < 1 + static_cast<int>(rng() % 6); ++p) {
      TrainingPair tp;
      for (int i = 0; i < static_cast<int>(rng() % 3); ++i) {
        tp.context.push_back(kNumReserved + rng() % 4);
      }
      tp.context.push_back(kSep);
      for (int i = 0; i < static_cast<int>(rng() % 5); ++i) {
        tp.output.ids.push_back(kNumReserved + rng() % 4);
      }
      tp.output.ids.push_back(kEos);
      corpus.push_back(tp);
    }
    const auto s = train_ngram_speaker(v, corpus, order, 0.1);
    const auto want = enumerate_counts(corpus, order);
    ASSERT_EQ(s.counts().size(), want.size());
    for (const auto& [h, row] : want) {
      const auto& got = s.counts().at(h);
      EXPECT_EQ(got.next, row);
    }
  }
}

TEST(NGramSpeaker, FeatureEvidenceMatchesClosedForm) {
  // Outputs follow the context feature: x -> "a", y -> "b".
  const Vocabulary v({"a", "b", "x", "y"});
  const TokenId a = v.id("a"), b = v.id("b"), x = v.id("x"), y = v.id("y");
  const std::vector<TrainingPair> corpus = {{{x, kSep}, seq({a, kEos})},
                                            {{x, kSep}, seq({a, kEos})},
                                            {{y, kSep}, seq({b, kEos})}};
  const double k = 0.1;
  const auto s = train_ngram_speaker(v, corpus, 2, k);
  const double n = static_cast<double>(v.size());
  const double g = k * n;
  // History {BOS}: counts a:2, b:1, total 3. P(x) = 2/3, P(y) = 1/3.
  auto closed_form = [&](bool has_x) {
    std::vector<double> lp(v.size());
    const double total = 3.0;
    for (TokenId t = 0; t < v.size(); ++t) {
      const double c = t == a ? 2.0 : t == b ? 1.0 : 0.0;
      lp[t] = std::log((c + k) / (total + g));
    }
    struct F { double prior, fh, fa, fb; bool present; };
    const F fs[] = {{2.0 / 3.0, 2.0, 2.0, 0.0, has_x}, {1.0 / 3.0, 1.0, 0.0, 1.0, !has_x}};
    for (const auto& f : fs) {
      const double ph = (f.fh + g * f.prior) / (total + g);
      const double pa = (f.fa + g * ph) / (2.0 + g);
      const double pb = (f.fb + g * ph) / (1.0 + g);
      lp[a] += f.present ? std::log(pa / ph) : std::log((1 - pa) / (1 - ph));
      lp[b] += f.present ? std::log(pb / ph) : std::log((1 - pb) / (1 - ph));
    }
    return log_normalize_log(lp);
  };
  for (bool has_x : {true, false}) {
    const auto got = s.next_token_logprobs(Context{has_x ? x : y, kSep}, {});
    const auto want = closed_form(has_x);
    for (TokenId t = 0; t < v.size(); ++t) EXPECT_NEAR(got[t], want[t], 1e-12);
  }
  const auto px = s.next_token_logprobs(Context{x, kSep}, {});
  const auto py = s.next_token_logprobs(Context{y, kSep}, {});
  EXPECT_GT(px[a], px[b]);
  EXPECT_GT(py[b], py[a]);
}

TEST(NGramSpeaker, StepDistributionsNormalize) {
  const auto& c = small();
  std::mt19937_64 rng(2);
  for (int q = 0; q < 300; ++q) {
    const auto& ref = speaker_pairs(std::span(c.records).subspan(q % c.records.size(), 1), c.vocab)[0].second;
    const std::size_t cut = rng() % ref.ids.size();
    const std::vector<TokenId> prefix(ref.ids.begin(), ref.ids.begin() + cut);
    const auto lp = c.speaker->next_token_logprobs(c.context((q * 7) % c.records.size()), prefix);
    ASSERT_EQ(lp.size(), c.vocab.size());
    EXPECT_NEAR(std::exp(log_sum_exp(lp)), 1.0, 1e-9);
  }
}

TEST(NGramSpeaker, RepeatedCallsAreBitIdentical) {
  const auto& c = small();
  const std::vector<TokenId> prefix = {c.vocab.id("the")};
  EXPECT_EQ(c.speaker->next_token_logprobs(c.context(1), prefix),
            c.speaker->next_token_logprobs(c.context(1), prefix));
}

TEST(NGramSpeaker, LargerKMovesTowardsUniform) {
  const auto& base = small();
  Linearizer lin(base.schema, base.vocab);
  const auto pairs = speaker_pairs(base.records, base.vocab);
  auto kl_to_uniform = [&](double k) {
    const auto s = train_ngram_speaker(lin, pairs, 3, k);
    double total = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
      const auto& ref = pairs[i].second.ids;
      for (std::size_t cut = 0; cut < std::min<std::size_t>(ref.size(), 4); ++cut) {
        const std::vector<TokenId> prefix(ref.begin(), ref.begin() + cut);
        const auto lp = s.next_token_logprobs(base.context(i), prefix);
        for (double x : lp) {
          total += std::exp(x) * (x + std::log(static_cast<double>(lp.size())));
        }
      }
    }
    return total;
  };
  double prev = kl_to_uniform(0.01);
  for (double k : {0.1, 1.0, 10.0, 100.0}) {
    const double cur = kl_to_uniform(k);
    EXPECT_LT(cur, prev) << "k=" << k;
    prev = cur;
  }
}

TEST(NGramSpeaker, RejectsBadTrainingArguments) {
  const Vocabulary v = ab_vocab();
  const std::vector<TrainingPair> one = {{{kSep}, seq({kEos})}};
  EXPECT_THROW(train_ngram_speaker(v, {}, 3, 0.1), Error);
  EXPECT_THROW(train_ngram_speaker(v, one, 1, 0.1), Error);
  EXPECT_THROW(train_ngram_speaker(v, one, 3, 0.0), Error);
}

TEST(SequenceLogprob, EosOnlyOutput) {
  const auto& c = small();
  const auto ctx = c.context(0);
  EXPECT_EQ(sequence_logprob(*c.speaker, ctx, seq({kEos})),
            c.speaker->next_token_logprobs(ctx, {})[kEos]);
}

TEST(SequenceLogprob, EqualsChainRuleSumExactly) {
  const auto& c = small();
  const auto pairs = speaker_pairs(c.records, c.vocab);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto ctx = c.context(i);
    const auto& out = pairs[i].second;
    double sum = 0.0;
    for (std::size_t t = 0; t < out.ids.size(); ++t) {
      const std::vector<TokenId> prefix(out.ids.begin(), out.ids.begin() + t);
      sum += c.speaker->next_token_logprobs(ctx, prefix)[out.ids[t]];
    }
    EXPECT_EQ(sequence_logprob(*c.speaker, ctx, out), sum);
  }
}

TEST(SequenceLogprob, BigramHandComputation) {
  const Vocabulary v = ab_vocab();
  const TokenId a = v.id("a"), b = v.id("b");
  const std::vector<TrainingPair> corpus = {{{kSep}, seq({a, b, kEos})}};
  const double k = 0.2;
  const auto s = train_ngram_speaker(v, corpus, 2, k);
  const double n = static_cast<double>(v.size());
  // P(a | BOS) * P(EOS | a); both histories seen once, EOS never after a.
  const double want = std::log((1 + k) / (1 + k * n)) + std::log(k / (1 + k * n));
  EXPECT_NEAR(sequence_logprob(s, Context{kSep}, seq({a, kEos})), want, 1e-12);
}

TEST(SequenceLogprob, RejectsUnterminatedOutput) {
  const auto& c = small();
  EXPECT_THROW(sequence_logprob(*c.speaker, c.context(0), seq({7})), Error);
}

TEST(Ensemble, LogprobArithmetic) {
  EXPECT_EQ(ensemble_logprob(-4.5, -9.0, 1.0), -4.5);
  EXPECT_EQ(ensemble_logprob(-1.0, -3.0, 0.5), -2.0);
  EXPECT_THROW(ensemble_logprob(-1.0, -3.0, 1.5), Error);
  EXPECT_THROW(ensemble_logprob(-1.0, -3.0, -0.1), Error);
}

TEST(Ensemble, CandidateOrderingMatchesRecomputation) {
  const std::vector<std::pair<double, double>> cands = {{-1.0, -6.0}, {-3.0, -2.0}, {-2.5, -3.0}};
  std::vector<std::size_t> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return ensemble_logprob(cands[x].first, cands[x].second, 0.5) >
           ensemble_logprob(cands[y].first, cands[y].second, 0.5);
  });
  // Hand values: -3.5, -2.5, -2.75.
  EXPECT_EQ(order, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(Ensemble, DegenerateWeightsReturnMembers) {
  auto a = std::make_shared<testing::HashSpeaker>(5, 1);
  auto b = std::make_shared<testing::HashSpeaker>(5, 2);
  const Context ctx = {4, kSep};
  const std::vector<TokenId> prefix = {3};
  EXPECT_EQ(EnsembleSpeaker(a, b, 1.0).next_token_logprobs(ctx, prefix),
            a->next_token_logprobs(ctx, prefix));
  EXPECT_EQ(EnsembleSpeaker(a, b, 0.0).next_token_logprobs(ctx, prefix),
            b->next_token_logprobs(ctx, prefix));
}

TEST(Ensemble, IdenticalMembersEqualTheMember) {
  auto a = std::make_shared<testing::HashSpeaker>(7, 4);
  const EnsembleSpeaker e(a, a, 0.3);
  for (TokenId p = 0; p < 7; ++p) {
    const std::vector<TokenId> prefix = {p};
    const auto got = e.next_token_logprobs(Context{kSep}, prefix);
    const auto want = a->next_token_logprobs(Context{kSep}, prefix);
    for (std::size_t v = 0; v < got.size(); ++v) EXPECT_NEAR(got[v], want[v], 1e-12);
  }
}

TEST(Ensemble, InterpolatesAndRenormalizes) {
  auto a = std::make_shared<testing::HashSpeaker>(6, 8);
  auto b = std::make_shared<testing::HashSpeaker>(6, 9);
  const EnsembleSpeaker e(a, b, 0.25);
  const auto la = a->next_token_logprobs(Context{kSep}, {});
  const auto lb = b->next_token_logprobs(Context{kSep}, {});
  std::vector<double> mix(6);
  for (std::size_t v = 0; v < 6; ++v) mix[v] = 0.25 * la[v] + 0.75 * lb[v];
  const auto want = log_normalize_log(mix);
  const auto got = e.next_token_logprobs(Context{kSep}, {});
  for (std::size_t v = 0; v < 6; ++v) EXPECT_NEAR(got[v], want[v], 1e-12);
  EXPECT_THROW(EnsembleSpeaker(a, b, 2.0), Error);
}

TEST(SpeakerIo, RoundTripIsLosslessAndDeterministic) {
  const auto& c = small();
  TempDir dir("speaker");
  save_ngram_speaker(*c.speaker, dir / "s.json");
  save_ngram_speaker(*c.speaker, dir / "t.json");
  EXPECT_EQ(testing::slurp(dir / "s.json"), testing::slurp(dir / "t.json"));
  const auto loaded = load_speaker(dir / "s.json");
  EXPECT_EQ(loaded.vocab, c.vocab);
  for (std::size_t i = 0; i < 10; ++i) {
    const std::vector<TokenId> prefix = {c.vocab.id("the"), c.vocab.id("venue")};
    EXPECT_EQ(loaded.model->next_token_logprobs(c.context(i), prefix),
              c.speaker->next_token_logprobs(c.context(i), prefix));
  }
  EXPECT_EQ(ngram_to_json(ngram_from_json(ngram_to_json(*c.speaker))),
            ngram_to_json(*c.speaker));
}

TEST(SpeakerIo, EnsembleResolvesMembersNextToTheFile) {
  const auto& c = small();
  TempDir dir("ensemble");
  save_ngram_speaker(*c.speaker, dir / "models" / "a.json");
  save_ngram_speaker(*c.speaker, dir / "models" / "b.json");
  save_ensemble(dir / "models" / "e.json", 0.5, {"a.json", "b.json"});
  const auto e = load_speaker(dir / "models" / "e.json");
  const auto lp = e.model->next_token_logprobs(c.context(0), {});
  const auto want = c.speaker->next_token_logprobs(c.context(0), {});
  for (std::size_t v = 0; v < lp.size(); ++v) EXPECT_NEAR(lp[v], want[v], 1e-12);
}

TEST(SpeakerIo, MissingAndMalformedFiles) {
  TempDir dir("badspeaker");
  try {
    load_speaker(dir / "nope.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  testing::spit(dir / "bad.json", "{not json");
  try {
    load_speaker(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataLoss);
  }
}

}  // namespace
}  // namespace prag
