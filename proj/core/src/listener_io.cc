#include <memory>

#include "json_util.h"
#include "prag/error.h"
#include "prag/listener.h"
#include "prag/speaker_io.h"

namespace prag {

using detail::json;

std::string attribute_listener_to_json(const AttributeClassifierListener& l) {
  json priors = json::object();
  json tokens = json::object();
  const auto& attrs = l.schema().attributes();
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    const auto& s = l.stats()[a];
    json jp = json::object();
    json jt = json::object();
    for (std::size_t c = 0; c < s.classes.size(); ++c) {
      jp[s.classes[c]] = s.class_counts[c];
      json jc = json::object();
      for (const auto& [t, n] : s.token_counts[c]) {
        jc[l.vocab().token(t)] = n;
      }
      jt[s.classes[c]] = std::move(jc);
    }
    priors[attrs[a].name] = std::move(jp);
    tokens[attrs[a].name] = std::move(jt);
  }
  json j = {{"type", "attribute-nb"},
            {"k", l.k()},
            {"schema", detail::schema_to_json_value(l.schema())},
            {"vocab", l.vocab().tokens()},
            {"priors", std::move(priors)},
            {"token_counts", std::move(tokens)}};
  return detail::dump(j);
}

AttributeClassifierListener attribute_listener_from_json(
    std::string_view text) {
  const json j = detail::parse_json(std::string(text), "listener model");
  try {
    if (j.at("type") != "attribute-nb") {
      throw_data_loss("not an attribute listener");
    }
    auto schema = detail::schema_from_json_value(j.at("schema"));
    auto toks = j.at("vocab").get<std::vector<std::string>>();
    if (toks.size() < kNumReserved) throw_data_loss("truncated vocabulary");
    Vocabulary vocab(
        std::vector<std::string>(toks.begin() + kNumReserved, toks.end()));
    if (vocab.tokens() != toks) throw_data_loss("malformed vocabulary");

    std::vector<AttributeClassifierListener::AttributeStats> stats;
    for (const auto& a : schema.attributes()) {
      AttributeClassifierListener::AttributeStats s;
      s.classes = attribute_classes(a);
      const auto& jp = j.at("priors").at(a.name);
      const auto& jt = j.at("token_counts").at(a.name);
      for (const auto& c : s.classes) {
        s.class_counts.push_back(jp.at(c).get<std::uint64_t>());
        std::map<TokenId, std::uint64_t> counts;
        std::uint64_t total = 0;
        for (const auto& [tok, n] : jt.at(c).items()) {
          if (!vocab.contains(tok)) {
            throw_data_loss("listener token '" + tok + "' not in vocabulary");
          }
          counts[vocab.id(tok)] = n.get<std::uint64_t>();
          total += n.get<std::uint64_t>();
        }
        s.token_counts.push_back(std::move(counts));
        s.token_totals.push_back(total);
      }
      stats.push_back(std::move(s));
    }
    return AttributeClassifierListener(std::move(schema), std::move(vocab),
                                       j.at("k").get<double>(),
                                       std::move(stats));
  } catch (const json::exception& e) {
    throw_data_loss(std::string("invalid attribute listener: ") + e.what());
  }
}

void save_attribute_listener(const AttributeClassifierListener& l,
                             const std::filesystem::path& path) {
  detail::write_file(path, attribute_listener_to_json(l));
}

void save_reverse_listener(const NGramSpeaker& reverse_speaker,
                           const AttributeSchema& schema,
                           const std::filesystem::path& path) {
  const std::string model_name =
      path.filename().string() + ".reverse-speaker.json";
  save_ngram_speaker(reverse_speaker, path.parent_path() / model_name);
  json j = {{"type", "reverse"},
            {"model", model_name},
            {"schema", detail::schema_to_json_value(schema)}};
  detail::write_file(path, detail::dump(j));
}

LoadedListener load_listener(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  const json j = detail::parse_json(text, path.string());
  const std::string type = j.value("type", "");
  if (type == "attribute-nb") {
    auto model = std::make_shared<AttributeClassifierListener>(
        attribute_listener_from_json(text));
    Vocabulary vocab = model->vocab();
    return {std::move(model), std::move(vocab)};
  }
  if (type == "reverse") {
    try {
      auto speaker = load_speaker(path.parent_path() /
                                  j.at("model").get<std::string>());
      auto schema = detail::schema_from_json_value(j.at("schema"));
      auto model = std::make_shared<ReverseSpeakerListener>(
          speaker.model, std::move(schema), speaker.vocab);
      return {std::move(model), std::move(speaker.vocab)};
    } catch (const json::exception& e) {
      throw_data_loss(std::string("invalid reverse listener: ") + e.what());
    }
  }
  throw_data_loss("unknown listener model type '" + type + "' in " +
                  path.string());
}

}  // namespace prag
