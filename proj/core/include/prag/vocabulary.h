#ifndef PRAG_VOCABULARY_H_
#define PRAG_VOCABULARY_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prag {

using TokenId = std::uint32_t;

// Reserved ids, fixed at indices 0-5 in every vocabulary.
inline constexpr TokenId kBos = 0;
inline constexpr TokenId kEos = 1;
inline constexpr TokenId kSep = 2;
inline constexpr TokenId kUnk = 3;
inline constexpr TokenId kNamePlh = 4;
inline constexpr TokenId kNearPlh = 5;
inline constexpr TokenId kNumReserved = 6;

inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";
inline constexpr std::string_view kSepToken = "<sep>";
inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kNamePlhToken = "NAME_PLH";
inline constexpr std::string_view kNearPlhToken = "NEAR_PLH";

bool is_placeholder(std::string_view token);

// Bijection between token strings and ids. Immutable once built.
class Vocabulary {
 public:
  // Reserved tokens only.
  Vocabulary();

  // Reserved tokens followed by `tokens` in the given order. Duplicates and
  // reserved strings are skipped; empty strings are rejected.
  explicit Vocabulary(const std::vector<std::string>& tokens);

  std::size_t size() const { return id_to_token_.size(); }

  // Returns kUnk for unknown strings.
  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;

  const std::vector<std::string>& tokens() const { return id_to_token_; }

  bool operator==(const Vocabulary& other) const {
    return id_to_token_ == other.id_to_token_;
  }

 private:
  void add(const std::string& token);

  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

// Output token ids. A sequence is terminated iff its last id is kEos.
struct TokenSequence {
  std::vector<TokenId> ids;

  bool terminated() const { return !ids.empty() && ids.back() == kEos; }
  bool operator==(const TokenSequence&) const = default;
  auto operator<=>(const TokenSequence&) const = default;
};

// Throws kInvalidArgument when an id is out of range or EOS appears anywhere
// but the final position.
void validate_sequence(const TokenSequence& seq, std::size_t vocab_size);

// Canonical word split: whitespace tokenization, `.`, `!`, `?` and `,` split
// into standalone tokens, everything lowercased except placeholder tokens.
std::vector<std::string> normalize_words(std::string_view text);

// normalize_words joined by single spaces.
std::string canonicalize(std::string_view text);

TokenSequence tokenize(std::string_view text, const Vocabulary& vocab);

// Space-joined token strings; BOS, EOS and SEP are dropped.
std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab);
inline std::string detokenize(const TokenSequence& seq,
                              const Vocabulary& vocab) {
  return detokenize(seq.ids, vocab);
}

}  // namespace prag

#endif  // PRAG_VOCABULARY_H_
