#include "prag/linearize.h"

#include <set>

#include "prag/error.h"

namespace prag {

Context linearize_mr(const MeaningRepresentation& mr,
                     const AttributeSchema& schema, const Vocabulary& vocab) {
  validate_mr(mr, schema);
  Context out;
  auto push_words = [&](const std::string& text) {
    for (const auto& w : normalize_words(text)) {
      if (!vocab.contains(w)) {
        throw_data_loss("unbuildable context: '" + w +
                        "' is not in the vocabulary");
      }
      out.push_back(vocab.id(w));
    }
  };
  for (const auto& a : schema.attributes()) {
    auto v = mr.get(a.name);
    if (!v) continue;
    push_words(a.name);
    push_words(*v);
  }
  out.push_back(kSep);
  return out;
}

Context linearize_tokens(const TokenSequence& seq) {
  Context out;
  for (TokenId id : seq.ids) {
    if (id == kBos || id == kEos || id == kSep) continue;
    out.push_back(id);
  }
  out.push_back(kSep);
  return out;
}

Context Linearizer::operator()(const InputUnit& unit) const {
  if (const auto* mr = std::get_if<MeaningRepresentation>(&unit)) {
    return linearize_mr(*mr, *schema_, *vocab_);
  }
  return linearize_tokens(std::get<TokenSequence>(unit));
}

Vocabulary build_vocabulary(const std::vector<std::string>& texts,
                            const AttributeSchema& schema) {
  std::set<std::string> words;
  auto add = [&](const std::string& text) {
    for (auto& w : normalize_words(text)) words.insert(std::move(w));
  };
  for (const auto& t : texts) add(t);
  for (const auto& a : schema.attributes()) {
    add(a.name);
    for (const auto& v : a.values) add(v);
  }
  return Vocabulary(std::vector<std::string>(words.begin(), words.end()));
}

}  // namespace prag
