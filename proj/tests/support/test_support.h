#ifndef PRAG_TESTS_TEST_SUPPORT_H_
#define PRAG_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "prag/corpus.h"
#include "prag/listener.h"
#include "prag/numeric.h"
#include "prag/speaker.h"
#include "prag/vocabulary.h"

namespace prag::testing {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_ids(std::uint64_t seed, std::span<const TokenId> a,
                              std::span<const TokenId> b) {
  std::uint64_t h = splitmix64(seed);
  for (TokenId id : a) h = splitmix64(h ^ (id + 1));
  h = splitmix64(h ^ 0xabcdefull);
  for (TokenId id : b) h = splitmix64(h ^ (id + 1));
  return h;
}

// Speaker whose step distributions are pseudo-random functions of
// (seed, context, prefix). With `levels` > 0 the unnormalized weights are
// drawn from {1, ..., levels}, which makes exact score ties common.
class HashSpeaker : public SpeakerModel {
 public:
  HashSpeaker(std::size_t vocab_size, std::uint64_t seed, int levels = 0)
      : n_(vocab_size), seed_(seed), levels_(levels) {}

  std::size_t vocab_size() const override { return n_; }

  std::vector<double> next_token_logprobs(
      std::span<const TokenId> context,
      std::span<const TokenId> prefix) const override {
    std::uint64_t h = hash_ids(seed_, context, prefix);
    std::vector<double> w(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      h = splitmix64(h);
      if (levels_ > 0) {
        w[v] = std::log(static_cast<double>(1 + h % levels_));
      } else {
        w[v] = std::log(0.05 + static_cast<double>(h >> 11) * 0x1.0p-53);
      }
    }
    return log_normalize_log(w);
  }

 private:
  std::size_t n_;
  std::uint64_t seed_;
  int levels_;
};

// Speaker defined by explicit per-context step tables, ignoring the prefix.
class FixedSpeaker : public SpeakerModel {
 public:
  FixedSpeaker(std::vector<Context> contexts,
               std::vector<std::vector<double>> probs)
      : contexts_(std::move(contexts)), probs_(std::move(probs)) {}

  std::size_t vocab_size() const override { return probs_.front().size(); }

  std::vector<double> next_token_logprobs(
      std::span<const TokenId> context,
      std::span<const TokenId>) const override {
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
      if (std::equal(context.begin(), context.end(), contexts_[i].begin(),
                     contexts_[i].end())) {
        std::vector<double> lp;
        for (double p : probs_[i]) lp.push_back(std::log(p));
        return lp;
      }
    }
    return std::vector<double>(vocab_size(),
                               -std::log(static_cast<double>(vocab_size())));
  }

 private:
  std::vector<Context> contexts_;
  std::vector<std::vector<double>> probs_;
};

// Listener returning a pseudo-random log-probability in [log 0.01, 0] per
// (input tokens, output).
class HashListener : public ListenerModel {
 public:
  explicit HashListener(std::uint64_t seed) : seed_(seed) {}

  double reconstruction_logprob(
      const InputUnit& input, std::span<const TokenId> output) const override {
    const auto& ids = std::get<TokenSequence>(input).ids;
    const std::uint64_t h = hash_ids(seed_ ^ 0x5eedull, ids, output);
    return std::log(0.01 + 0.99 * static_cast<double>(h >> 11) * 0x1.0p-53);
  }

 private:
  std::uint64_t seed_;
};

// Every sequence over [0, n) that either ends with its only EOS within
// max_len tokens or has exactly max_len tokens and no EOS.
inline std::vector<std::vector<TokenId>> enumerate_outputs(std::size_t n,
                                                           int max_len) {
  std::vector<std::vector<TokenId>> out;
  std::function<void(std::vector<TokenId>&)> rec = [&](std::vector<TokenId>& s) {
    for (TokenId v = 0; v < n; ++v) {
      s.push_back(v);
      if (v == kEos || static_cast<int>(s.size()) == max_len) {
        out.push_back(s);
      } else {
        rec(s);
      }
      s.pop_back();
    }
  };
  std::vector<TokenId> s;
  rec(s);
  return out;
}

// Fresh empty directory under the system temp dir.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("prag-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline CorpusRecord make_record(std::string id,
                                std::map<std::string, std::string> mr,
                                std::string reference,
                                std::map<std::string, std::string> delex = {}) {
  CorpusRecord r;
  r.id = std::move(id);
  r.mr.assignments = std::move(mr);
  r.reference = std::move(reference);
  r.delex = std::move(delex);
  return r;
}

}  // namespace prag::testing

#endif  // PRAG_TESTS_TEST_SUPPORT_H_
