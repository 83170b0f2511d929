#include "prag/speaker_io.h"

#include <memory>
#include <sstream>

#include "json_util.h"
#include "prag/error.h"

namespace prag {

using detail::json;

namespace {

std::string history_key(const std::vector<TokenId>& h) {
  std::string key;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) key.push_back(' ');
    key += std::to_string(h[i]);
  }
  return key;
}

TokenId parse_id(const std::string& s) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    throw_data_loss("bad token id '" + s + "'");
  }
  if (pos != s.size()) throw_data_loss("bad token id '" + s + "'");
  return static_cast<TokenId>(v);
}

std::vector<TokenId> parse_history(const std::string& key) {
  std::vector<TokenId> h;
  std::istringstream in(key);
  std::string tok;
  while (in >> tok) h.push_back(parse_id(tok));
  return h;
}

json table_to_json(const NGramTable& table) {
  json j = json::object();
  for (const auto& [h, row] : table) {
    json jr = json::object();
    for (const auto& [id, c] : row.next) jr[std::to_string(id)] = c;
    j[history_key(h)] = std::move(jr);
  }
  return j;
}

NGramTable table_from_json(const json& j, std::size_t vocab_size) {
  NGramTable table;
  for (const auto& [key, jr] : j.items()) {
    NGramRow row;
    for (const auto& [id_s, c] : jr.items()) {
      const TokenId id = parse_id(id_s);
      if (id >= vocab_size) throw_data_loss("count for unknown token id");
      const auto n = c.get<std::uint64_t>();
      row.next[id] = n;
      row.total += n;
    }
    table.emplace(parse_history(key), std::move(row));
  }
  return table;
}

}  // namespace

std::string ngram_to_json(const NGramSpeaker& speaker) {
  json features = json::object();
  for (const auto& [f, table] : speaker.feature_counts()) {
    features[std::to_string(f)] = table_to_json(table);
  }
  json j = {{"type", "ngram"},
            {"order", speaker.order()},
            {"k", speaker.k()},
            {"vocab", speaker.vocab().tokens()},
            {"counts", table_to_json(speaker.counts())},
            {"feature_counts", std::move(features)}};
  return detail::dump(j);
}

NGramSpeaker ngram_from_json(std::string_view text) {
  const json j = detail::parse_json(std::string(text), "speaker model");
  try {
    if (j.at("type") != "ngram") throw_data_loss("not an n-gram model");
    auto tokens = j.at("vocab").get<std::vector<std::string>>();
    if (tokens.size() < kNumReserved) throw_data_loss("truncated vocabulary");
    Vocabulary vocab(
        std::vector<std::string>(tokens.begin() + kNumReserved, tokens.end()));
    if (vocab.tokens() != tokens) {
      throw_data_loss("vocabulary is not a reserved-prefixed bijection");
    }
    std::map<TokenId, NGramTable> features;
    if (j.contains("feature_counts")) {
      for (const auto& [f, jt] : j.at("feature_counts").items()) {
        features.emplace(parse_id(f), table_from_json(jt, vocab.size()));
      }
    }
    auto counts = table_from_json(j.at("counts"), vocab.size());
    return NGramSpeaker(std::move(vocab), j.at("order").get<int>(),
                        j.at("k").get<double>(), std::move(counts),
                        std::move(features));
  } catch (const json::exception& e) {
    throw_data_loss(std::string("invalid n-gram model: ") + e.what());
  }
}

void save_ngram_speaker(const NGramSpeaker& speaker,
                        const std::filesystem::path& path) {
  detail::write_file(path, ngram_to_json(speaker));
}

void save_ensemble(const std::filesystem::path& path, double w,
                   const std::vector<std::string>& member_paths) {
  if (member_paths.size() != 2) {
    throw_invalid_argument("an ensemble has exactly two members");
  }
  if (!(w >= 0.0 && w <= 1.0)) {
    throw_invalid_argument("ensemble weight must lie in [0, 1]");
  }
  json j = {{"type", "ensemble"}, {"w", w}, {"members", member_paths}};
  detail::write_file(path, detail::dump(j));
}

LoadedSpeaker load_speaker(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  const json j = detail::parse_json(text, path.string());
  const std::string type = j.value("type", "");
  if (type == "ngram") {
    auto model = std::make_shared<NGramSpeaker>(ngram_from_json(text));
    Vocabulary vocab = model->vocab();
    return {std::move(model), std::move(vocab)};
  }
  if (type == "ensemble") {
    const auto members = j.at("members").get<std::vector<std::string>>();
    if (members.size() != 2) throw_data_loss("ensemble needs two members");
    const auto dir = path.parent_path();
    auto a = load_speaker(dir / members[0]);
    auto b = load_speaker(dir / members[1]);
    if (!(a.vocab == b.vocab)) {
      throw_data_loss("ensemble members use different vocabularies");
    }
    auto model = std::make_shared<EnsembleSpeaker>(a.model, b.model,
                                                   j.at("w").get<double>());
    return {std::move(model), std::move(a.vocab)};
  }
  throw_data_loss("unknown speaker model type '" + type + "' in " +
                  path.string());
}

}  // namespace prag
