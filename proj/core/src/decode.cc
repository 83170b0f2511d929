#include "prag/decode.h"

#include "json_util.h"
#include "prag/error.h"
#include "prag/parallel.h"

namespace prag {

using detail::json;

Prediction decode_record(const DecodeJob& job, const CorpusRecord& record,
                         const std::vector<InputUnit>& distractors) {
  const Linearizer lin(*job.schema, *job.vocab);
  ScoredCandidate best = generate(*job.speaker, job.listener, record.mr,
                                  distractors, lin, job.config);
  Prediction p;
  p.id = record.id;
  p.output = relexicalize(detokenize(best.output, *job.vocab), record.delex);
  p.candidate = std::move(best);
  return p;
}

std::vector<Prediction> decode_records(const DecodeJob& job,
                                       std::span<const CorpusRecord> records,
                                       int workers) {
  if (job.speaker == nullptr || job.schema == nullptr || job.vocab == nullptr) {
    throw_invalid_argument("decode job is missing a speaker, schema or vocab");
  }
  job.config.validate();
  if (job.config.mode == DecodeMode::kReconstructor && job.listener == nullptr) {
    throw_invalid_argument("reconstructor mode needs a listener");
  }

  // Record index -> (document, position).
  const auto groups = group_documents(records);
  std::vector<Document> docs;
  std::vector<std::pair<std::size_t, std::size_t>> where(records.size());
  docs.reserve(groups.size());
  for (std::size_t d = 0; d < groups.size(); ++d) {
    std::vector<InputUnit> units;
    for (std::size_t pos = 0; pos < groups[d].size(); ++pos) {
      units.emplace_back(records[groups[d][pos]].mr);
      where[groups[d][pos]] = {d, pos};
    }
    docs.emplace_back(std::move(units));
  }

  const bool use_policy = job.config.mode == DecodeMode::kDistractor;
  return parallel_map(records.size(), workers, [&](std::size_t i) {
    std::vector<InputUnit> distractors;
    if (use_policy) {
      const auto [d, pos] = where[i];
      distractors =
          build_distractors(job.policy, docs[d], pos, *job.schema, job.freqs);
    }
    return decode_record(job, records[i], distractors);
  });
}

std::string predictions_to_jsonl(std::span<const Prediction> predictions) {
  std::string out;
  for (const auto& p : predictions) {
    json j = {{"id", p.id},
              {"output", p.output},
              {"base_logprob", p.candidate.base_logprob}};
    if (p.candidate.listener_logprob) {
      j["listener_logprob"] = *p.candidate.listener_logprob;
    }
    if (p.candidate.combined_score) {
      j["combined_score"] = *p.candidate.combined_score;
    }
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<PredictionRow> read_predictions(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  std::vector<PredictionRow> rows;
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      rows.push_back(
          {j.at("id").get<std::string>(), j.at("output").get<std::string>()});
    } catch (const json::exception& e) {
      throw_data_loss("malformed prediction on line " +
                      std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace prag
