#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "prag/error.h"
#include "prag/listener.h"
#include "prag/ngram_speaker.h"
#include "prag/numeric.h"
#include "prag/speaker_io.h"
#include "prag/synthetic.h"
#include "prag/training.h"
#include "support/test_support.h"

namespace prag {
namespace {

using MrText = std::pair<MeaningRepresentation, TokenSequence>;

AttributeSchema toy_schema() {
  return AttributeSchema({
      {"area", AttributeKind::kCategorical, {"riverside", "centre"}, {}},
      {"ff", AttributeKind::kBoolean, {"yes", "no"}, {"kid friendly"}},
  });
}

Vocabulary toy_vocab() {
  return Vocabulary({"riverside", "centre", "kid", "friendly", "x", "ff", "area",
                     "yes", "no", "never"});
}

TokenSequence words(const Vocabulary& v, const std::string& text) {
  return tokenize(text, v);
}

MeaningRepresentation mr(std::map<std::string, std::string> a) {
  return MeaningRepresentation{std::move(a)};
}

std::vector<MrText> toy_corpus(const Vocabulary& v) {
  return {
      {mr({{"area", "riverside"}, {"ff", "yes"}}), words(v, "riverside kid friendly x")},
      {mr({{"area", "riverside"}}), words(v, "riverside x")},
      {mr({{"area", "centre"}, {"ff", "no"}}), words(v, "centre x x")},
      {mr({{"ff", "yes"}}), words(v, "kid friendly")},
      {mr({}), words(v, "x")},
  };
}

// Naive-Bayes posterior of one attribute recomputed from raw counts.
std::vector<double> closed_form_posterior(const std::vector<MrText>& corpus,
                                          const Attribute& attr, double k,
                                          const TokenSequence& text) {
  const auto classes = attribute_classes(attr);
  const double m = static_cast<double>(classes.size());
  std::map<std::string, double> prior;
  std::map<std::string, std::map<TokenId, double>> counts;
  std::map<std::string, double> totals;
  std::map<TokenId, double> bg;
  double bg_total = 0.0;
  for (const auto& [input, out] : corpus) {
    const auto c = attribute_class(attr, input);
    prior[c] += 1.0;
    for (TokenId t : out.ids) {
      counts[c][t] += 1.0;
      totals[c] += 1.0;
      bg[t] += 1.0;
      bg_total += 1.0;
    }
  }
  const double n = static_cast<double>(corpus.size());
  const double mass = k * static_cast<double>(bg.size());
  std::vector<double> score;
  for (const auto& c : classes) {
    double s = std::log((prior[c] + k) / (n + k * m));
    for (TokenId t : text.ids) {
      if (!bg.count(t)) continue;
      s += std::log((counts[c][t] + mass * bg[t] / bg_total) / (totals[c] + mass));
    }
    score.push_back(s);
  }
  return log_normalize_log(score);
}

TEST(AttributeListener, PosteriorMatchesNaiveBayesClosedForm) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const auto corpus = toy_corpus(v);
  const double k = 0.5;
  const auto l = train_attribute_listener(corpus, schema, v, k);
  for (const std::string text : {"riverside", "x x centre", "kid friendly", "", "riverside centre kid"}) {
    const auto o = words(v, text);
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const auto got = l.attribute_log_posterior(a, o.ids);
      const auto want = closed_form_posterior(corpus, schema.attributes()[a], k, o);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t c = 0; c < got.size(); ++c) {
        EXPECT_NEAR(got[c], want[c], 1e-12) << text << " attr " << a;
      }
    }
  }
}

TEST(AttributeListener, IndicativeWordRaisesItsClass) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const auto l = train_attribute_listener(toy_corpus(v), schema, v, 0.5);
  const auto with = l.attribute_posteriors(words(v, "riverside x").ids)[0];
  const auto without = l.attribute_posteriors(words(v, "x").ids)[0];
  // Class 0 is "riverside".
  EXPECT_GT(with[0], without[0]);
}

TEST(AttributeListener, SingleValueCorpusIsDominatedByThePrior) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const std::vector<MrText> corpus = {
      {mr({{"area", "centre"}}), words(v, "x riverside")},
      {mr({{"area", "centre"}}), words(v, "kid")},
      {mr({{"area", "centre"}}), words(v, "centre friendly")},
  };
  const auto l = train_attribute_listener(corpus, schema, v, 0.5);
  for (const std::string text : {"riverside", "riverside riverside riverside", "kid x", ""}) {
    const auto post = l.attribute_posteriors(words(v, text).ids)[0];
    for (double p : post) EXPECT_GE(post[1], p) << text;
  }
}

TEST(AttributeListener, UnseenTokenShiftsNoPosterior) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const auto l = train_attribute_listener(toy_corpus(v), schema, v, 0.5);
  const auto base = l.attribute_posteriors(words(v, "riverside x").ids);
  const auto extra = l.attribute_posteriors(words(v, "riverside never x never").ids);
  for (std::size_t a = 0; a < base.size(); ++a) {
    for (std::size_t c = 0; c < base[a].size(); ++c) {
      EXPECT_NEAR(base[a][c], extra[a][c], 1e-15);
    }
  }
}

TEST(AttributeListener, PosteriorsNormalize) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const auto l = train_attribute_listener(toy_corpus(v), schema, v, 0.5);
  for (const std::string text : {"riverside", "x x x kid", "", "never"}) {
    for (const auto& p : l.attribute_posteriors(words(v, text).ids)) {
      double s = 0.0;
      for (double x : p) s += x;
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
}

TEST(AttributeListener, UntrainedSingleAttributeIsUniform) {
  const AttributeSchema schema({{"area", AttributeKind::kCategorical, {"riverside", "centre"}, {}}});
  const auto v = toy_vocab();
  const AttributeClassifierListener l(schema, v, 0.5);
  // Classes: riverside, centre, ABSENT.
  EXPECT_NEAR(l.reconstruction_logprob(mr({{"area", "centre"}}), words(v, "riverside").ids),
              std::log(1.0 / 3.0), 1e-12);
}

TEST(AttributeListener, JointIsSumOfAttributePosteriors) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const auto l = train_attribute_listener(toy_corpus(v), schema, v, 0.5);
  const auto o = words(v, "riverside kid friendly");
  const auto input = mr({{"area", "riverside"}, {"ff", "no"}});
  const double a0 = l.attribute_log_posterior(0, o.ids)[0];
  // ff classes: yes, no, ABSENT.
  const double a1 = l.attribute_log_posterior(1, o.ids)[1];
  EXPECT_EQ(l.reconstruction_logprob(input, o.ids), a0 + a1);
}

TEST(AttributeListener, TwoAttributeJointMatchesHandProduct) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const auto corpus = toy_corpus(v);
  const auto l = train_attribute_listener(corpus, schema, v, 0.5);
  const auto o = words(v, "centre x");
  const auto p0 = closed_form_posterior(corpus, schema.attributes()[0], 0.5, o);
  const auto p1 = closed_form_posterior(corpus, schema.attributes()[1], 0.5, o);
  // area ABSENT (index 2), ff yes (index 0).
  EXPECT_NEAR(l.reconstruction_logprob(mr({{"ff", "yes"}}), o.ids), p0[2] + p1[0], 1e-12);
}

TEST(AttributeListener, JointSumsToOneOverAllCompleteMrs) {
  const AttributeSchema schema({
      {"area", AttributeKind::kCategorical, {"riverside", "centre"}, {}},
      {"ff", AttributeKind::kBoolean, {"yes", "no"}, {"kid friendly"}},
      {"name", AttributeKind::kDelexicalized, {"NAME_PLH"}, {}},
  });
  const auto v = toy_vocab();
  auto corpus = toy_corpus(v);
  corpus[0].first.assignments["name"] = "NAME_PLH";
  corpus[2].first.assignments["name"] = "NAME_PLH";
  const auto l = train_attribute_listener(corpus, schema, v, 0.5);
  for (const std::string text : {"riverside kid", "x", ""}) {
    const auto o = words(v, text);
    double total = 0.0;
    for (const std::string area : {"riverside", "centre", ""}) {
      for (const std::string ff : {"yes", "no", ""}) {
        for (bool name : {true, false}) {
          MeaningRepresentation m;
          if (!area.empty()) m.assignments["area"] = area;
          if (!ff.empty()) m.assignments["ff"] = ff;
          if (name) m.assignments["name"] = "NAME_PLH";
          total += std::exp(l.reconstruction_logprob(m, o.ids));
        }
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-6) << text;
  }
}

TEST(AttributeListener, RejectsInvalidInputsAndTraining) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const auto l = train_attribute_listener(toy_corpus(v), schema, v, 0.5);
  EXPECT_THROW(l.reconstruction_logprob(mr({{"area", "moon"}}), {}), Error);
  EXPECT_THROW(l.reconstruction_logprob(TokenSequence{{7}}, {}), Error);
  EXPECT_THROW(train_attribute_listener({}, schema, v, 0.5), Error);
  EXPECT_THROW(train_attribute_listener(toy_corpus(v), schema, v, 0.0), Error);
}

TEST(AttributeListener, SerializationRoundTrip) {
  const auto schema = toy_schema();
  const auto v = toy_vocab();
  const auto l = train_attribute_listener(toy_corpus(v), schema, v, 0.5);
  const std::string text = attribute_listener_to_json(l);
  EXPECT_EQ(attribute_listener_to_json(attribute_listener_from_json(text)), text);
  testing::TempDir dir("listener");
  save_attribute_listener(l, dir / "l.json");
  const auto loaded = load_listener(dir / "l.json");
  EXPECT_EQ(loaded.vocab, v);
  const auto o = words(v, "riverside kid");
  const auto input = mr({{"area", "riverside"}});
  EXPECT_EQ(loaded.model->reconstruction_logprob(input, o.ids),
            l.reconstruction_logprob(input, o.ids));
}

class ReverseListenerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (auto& r : generate_corpus(default_grammar(schema), 200, 5)) {
      records.push_back(delexicalize(r, schema));
    }
    vocab = corpus_vocabulary(records, schema);
  }
  AttributeSchema schema = default_e2e_schema();
  std::vector<CorpusRecord> records;
  Vocabulary vocab;
};

TEST_F(ReverseListenerTest, TrainsOnSwappedPairs) {
  const Linearizer lin(schema, vocab);
  const auto pairs = speaker_pairs(records, vocab);
  const auto reverse = train_reverse_speaker(lin, pairs, 3, 0.1);
  std::vector<TrainingPair> swapped;
  for (const auto& [input, out] : pairs) {
    swapped.push_back({linearize_tokens(out), TokenSequence{lin(input)}});
  }
  const auto direct = train_ngram_speaker(vocab, swapped, 3, 0.1);
  EXPECT_EQ(reverse.counts(), direct.counts());
  EXPECT_EQ(reverse.feature_counts(), direct.feature_counts());
}

TEST_F(ReverseListenerTest, ScoreIsSequenceLogprobOfLinearizedInput) {
  const Linearizer lin(schema, vocab);
  const auto pairs = speaker_pairs(records, vocab);
  auto reverse = std::make_shared<NGramSpeaker>(train_reverse_speaker(lin, pairs, 3, 0.1));
  const ReverseSpeakerListener l(reverse, schema, vocab);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& o = pairs[(i + 3) % pairs.size()].second;
    TokenSequence target{lin(pairs[i].first)};
    target.ids.push_back(kEos);
    EXPECT_EQ(l.reconstruction_logprob(pairs[i].first, o.ids),
              sequence_logprob(*reverse, linearize_tokens(o), target));
  }
}

TEST_F(ReverseListenerTest, SavedStubReloads) {
  const Linearizer lin(schema, vocab);
  const auto pairs = speaker_pairs(records, vocab);
  auto reverse = std::make_shared<NGramSpeaker>(train_reverse_speaker(lin, pairs, 3, 0.1));
  testing::TempDir dir("reverse");
  save_reverse_listener(*reverse, schema, dir / "rev.json");
  const auto loaded = load_listener(dir / "rev.json");
  const ReverseSpeakerListener direct(reverse, schema, vocab);
  EXPECT_EQ(loaded.vocab, vocab);
  EXPECT_EQ(loaded.model->reconstruction_logprob(pairs[0].first, pairs[1].second.ids),
            direct.reconstruction_logprob(pairs[0].first, pairs[1].second.ids));
}

}  // namespace
}  // namespace prag
