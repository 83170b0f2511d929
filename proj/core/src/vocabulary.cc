#include "prag/vocabulary.h"

#include <cctype>

#include "prag/error.h"

namespace prag {

bool is_placeholder(std::string_view token) {
  return token == kNamePlhToken || token == kNearPlhToken;
}

Vocabulary::Vocabulary() {
  for (auto t : {kBosToken, kEosToken, kSepToken, kUnkToken, kNamePlhToken,
                 kNearPlhToken}) {
    add(std::string(t));
  }
}

Vocabulary::Vocabulary(const std::vector<std::string>& tokens) : Vocabulary() {
  for (const auto& t : tokens) {
    if (t.empty()) throw_invalid_argument("vocabulary token must be non-empty");
    if (!token_to_id_.contains(t)) add(t);
  }
}

void Vocabulary::add(const std::string& token) {
  token_to_id_.emplace(token, static_cast<TokenId>(id_to_token_.size()));
  id_to_token_.push_back(token);
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.contains(std::string(token));
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id >= id_to_token_.size()) {
    throw_invalid_argument("token id " + std::to_string(id) +
                           " out of range");
  }
  return id_to_token_[id];
}

void validate_sequence(const TokenSequence& seq, std::size_t vocab_size) {
  for (std::size_t i = 0; i < seq.ids.size(); ++i) {
    if (seq.ids[i] >= vocab_size) {
      throw_invalid_argument("token id " + std::to_string(seq.ids[i]) +
                             " out of range");
    }
    if (seq.ids[i] == kEos && i + 1 != seq.ids.size()) {
      throw_invalid_argument("EOS before the end of a sequence");
    }
  }
}

namespace {

bool is_split_punct(char c) {
  return c == '.' || c == '!' || c == '?' || c == ',';
}

void emit_word(std::string word, std::vector<std::string>& out) {
  if (word.empty()) return;
  if (!is_placeholder(word)) {
    for (auto& c : word) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  out.push_back(std::move(word));
}

}  // namespace

std::vector<std::string> normalize_words(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      emit_word(std::move(word), out);
      word.clear();
    } else if (is_split_punct(c)) {
      emit_word(std::move(word), out);
      word.clear();
      out.emplace_back(1, c);
    } else {
      word.push_back(c);
    }
  }
  emit_word(std::move(word), out);
  return out;
}

std::string canonicalize(std::string_view text) {
  std::string out;
  for (const auto& w : normalize_words(text)) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

TokenSequence tokenize(std::string_view text, const Vocabulary& vocab) {
  TokenSequence seq;
  for (const auto& w : normalize_words(text)) seq.ids.push_back(vocab.id(w));
  return seq;
}

std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab) {
  std::string out;
  for (TokenId id : ids) {
    if (id == kBos || id == kEos || id == kSep) continue;
    if (!out.empty()) out.push_back(' ');
    out += vocab.token(id);
  }
  return out;
}

}  // namespace prag
