#include "cli/commands.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "prag/ablation.h"
#include "prag/corpus.h"
#include "prag/decode.h"
#include "prag/distractor.h"
#include "prag/error.h"
#include "prag/listener.h"
#include "prag/metrics.h"
#include "prag/ngram_speaker.h"
#include "prag/speaker_io.h"
#include "prag/synthetic.h"
#include "prag/training.h"

namespace prag::cli {
namespace fs = std::filesystem;

namespace {

AttributeSchema resolve_schema(const GlobalOptions& g) {
  return g.schema.empty() ? default_e2e_schema() : load_schema(g.schema);
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw_invalid_argument(std::string("missing required option ") + flag);
  }
}

// Writes `text` to `path`, or to `out` when no path is given.
void emit(const std::string& path, const std::string& text,
          std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw_not_found("cannot write " + path);
  f << text;
  if (!f) throw_data_loss("failed writing " + path);
}

std::vector<CorpusRecord> load_nonempty(const std::string& path,
                                        const AttributeSchema& schema,
                                        const char* flag) {
  require(path, flag);
  auto records = load_dataset(path, schema);
  if (records.empty()) throw_invalid_argument("dataset " + path + " is empty");
  return records;
}

DecodeConfig decode_config(const DecodeOptions& o) {
  DecodeConfig c = o.preset == "summarization"
                       ? DecodeConfig::summarization_preset()
                       : DecodeConfig::meaning_representation_preset();
  if (o.beam) c.beam_size = *o.beam;
  if (o.max_len) c.max_len = *o.max_len;
  if (o.lambda) c.lambda = *o.lambda;
  if (o.alpha) c.alpha = *o.alpha;
  c.mode = parse_decode_mode(o.mode);
  c.validate();
  return c;
}

std::vector<MeaningRepresentation> mrs_of(
    std::span<const CorpusRecord> records) {
  std::vector<MeaningRepresentation> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.mr);
  return out;
}

}  // namespace

void cmd_synth(const GlobalOptions& g, const SynthOptions& o,
               std::ostream& out) {
  require(o.out_dir, "--out-dir");
  const AttributeSchema schema = resolve_schema(g);
  SyntheticGrammar grammar =
      o.grammar.empty() ? default_grammar(schema) : load_grammar(o.grammar, schema);
  if (o.omission_rate) grammar.omission_rate = *o.omission_rate;
  grammar.validate();
  const std::size_t total = o.train + o.dev + o.test;
  if (total == 0) throw_invalid_argument("nothing to generate");

  const auto corpus = generate_corpus(grammar, total, g.seed);
  std::vector<CorpusRecord> delex;
  delex.reserve(corpus.size());
  for (const auto& r : corpus) delex.push_back(delexicalize(r, schema));

  const std::span<const CorpusRecord> all(delex);
  const std::pair<const char*, std::span<const CorpusRecord>> splits[] = {
      {"train.jsonl", all.subspan(0, o.train)},
      {"dev.jsonl", all.subspan(o.train, o.dev)},
      {"test.jsonl", all.subspan(o.train + o.dev, o.test)},
  };
  for (const auto& [name, records] : splits) {
    write_jsonl(records, fs::path(o.out_dir) / name);
  }
  out << "wrote " << o.train << " train, " << o.dev << " dev and " << o.test
      << " test records to " << o.out_dir << "\n";
}

void cmd_train(const GlobalOptions& g, const TrainOptions& o,
               std::ostream& out) {
  require(o.out, "--out");
  if (o.kind == "ensemble") {
    if (o.members.size() != 2) {
      throw_invalid_argument("an ensemble needs exactly two --members");
    }
    const auto a = load_speaker(o.members[0]);
    const auto b = load_speaker(o.members[1]);
    if (!(a.vocab == b.vocab)) {
      throw_invalid_argument("ensemble members use different vocabularies");
    }
    // Member paths are stored relative to the ensemble file.
    const fs::path base = fs::absolute(fs::path(o.out)).parent_path();
    std::vector<std::string> rel;
    for (const auto& m : o.members) {
      rel.push_back(fs::absolute(m).lexically_normal()
                        .lexically_relative(base.lexically_normal())
                        .generic_string());
    }
    save_ensemble(o.out, o.w, rel);
    out << "wrote ensemble to " << o.out << "\n";
    return;
  }

  const AttributeSchema schema = resolve_schema(g);
  const auto records = load_nonempty(o.data, schema, "--data");
  const Vocabulary vocab = corpus_vocabulary(records, schema);
  const Linearizer lin(schema, vocab);

  if (o.kind == "speaker") {
    const auto model = train_ngram_speaker(lin, speaker_pairs(records, vocab),
                                           o.order,
                                           o.k.value_or(kDefaultSpeakerK));
    save_ngram_speaker(model, o.out);
  } else if (o.listener_type == "attribute") {
    const auto model = train_attribute_listener(
        listener_pairs(records, vocab), schema, vocab,
        o.k.value_or(kDefaultListenerK));
    save_attribute_listener(model, o.out);
  } else {
    const auto model = train_reverse_speaker(
        lin, speaker_pairs(records, vocab), o.order,
        o.k.value_or(kDefaultSpeakerK));
    save_reverse_listener(model, schema, o.out);
  }
  out << "trained " << o.kind << " on " << records.size() << " records, wrote "
      << o.out << "\n";
}

void cmd_generate(const GlobalOptions& g, const DecodeOptions& o,
                  std::ostream& out) {
  require(o.speaker, "--speaker");
  const AttributeSchema schema = resolve_schema(g);
  const DecodeConfig config = decode_config(o);
  const auto speaker = load_speaker(o.speaker);

  std::optional<LoadedListener> listener;
  if (!o.listener.empty()) {
    listener = load_listener(o.listener);
    if (!(listener->vocab == speaker.vocab)) {
      throw_invalid_argument("speaker and listener vocabularies differ");
    }
  }
  if (config.mode == DecodeMode::kReconstructor && !listener) {
    throw_invalid_argument("--mode reconstructor requires --listener");
  }

  DecodeJob job;
  job.speaker = speaker.model.get();
  job.listener = listener ? listener->model.get() : nullptr;
  job.schema = &schema;
  job.vocab = &speaker.vocab;
  job.config = config;
  job.policy = parse_distractor_policy(o.distractor_policy, schema);

  std::optional<ValueFrequencyTable> freqs;
  if (config.mode == DecodeMode::kDistractor &&
      std::holds_alternative<policy::MaskAll>(job.policy)) {
    if (o.train_data.empty()) {
      throw_invalid_argument("the mask-all policy requires --train-data");
    }
    const auto train = load_nonempty(o.train_data, schema, "--train-data");
    freqs = value_frequencies(mrs_of(train), schema);
    job.freqs = &*freqs;
  }

  const auto records = load_nonempty(o.data, schema, "--data");
  const auto predictions = decode_records(job, records, g.workers);
  emit(o.out, predictions_to_jsonl(predictions), out);
}

void cmd_evaluate(const GlobalOptions& g, const EvaluateOptions& o,
                  std::ostream& out) {
  require(o.predictions, "--predictions");
  const AttributeSchema schema = resolve_schema(g);
  std::set<std::string> wanted;
  for (const auto& m : o.metrics) {
    if (m != "bleu" && m != "rouge_l" && m != "coverage") {
      throw_invalid_argument("unknown metric '" + m + "'");
    }
    wanted.insert(m);
  }
  if (wanted.empty()) throw_invalid_argument("no metrics selected");

  const auto predictions = read_predictions(o.predictions);
  const auto references = load_nonempty(o.data, schema, "--data");

  std::map<std::string, std::string> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.id, p.output).second) {
      throw_invalid_argument("duplicate prediction id '" + p.id + "'");
    }
  }
  std::vector<std::string> missing;
  std::set<std::string> ref_ids;
  std::vector<std::string> hyps;
  std::vector<std::string> refs;
  for (const auto& r : references) {
    ref_ids.insert(r.id);
    auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      missing.push_back(r.id);
    } else {
      hyps.push_back(it->second);
      refs.push_back(surface_reference(r));
    }
  }
  for (const auto& p : predictions) {
    if (!ref_ids.count(p.id)) missing.push_back(p.id);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i) list += ", ";
      list += missing[i];
    }
    throw_invalid_argument("unmatched ids: " + list);
  }

  MetricsReport report;
  if (wanted.count("bleu")) report.bleu = bleu(hyps, refs);
  if (wanted.count("rouge_l")) report.rouge_l = corpus_rouge_l(hyps, refs);
  if (wanted.count("coverage")) {
    const CoverageMatcher matcher(schema);
    for (const auto& a : schema.attributes()) {
      report.coverage[a.name] = coverage_ratio(references, hyps, a.name, matcher);
    }
  }
  emit(o.out, metrics_to_json(report), out);
}

void cmd_ablate(const GlobalOptions& g, const DecodeOptions& o,
                std::ostream& out) {
  require(o.speaker, "--speaker");
  const AttributeSchema schema = resolve_schema(g);
  DecodeOptions opts = o;
  opts.mode = "distractor";
  const DecodeConfig config = decode_config(opts);
  const auto speaker = load_speaker(o.speaker);
  const auto records = load_nonempty(o.data, schema, "--data");

  DecodeJob job;
  job.speaker = speaker.model.get();
  job.schema = &schema;
  job.vocab = &speaker.vocab;
  job.config = config;

  const auto attributes =
      o.attributes.empty() ? default_ablation_attributes(schema) : o.attributes;
  const CoverageMatcher matcher(schema);
  const auto matrix =
      ablation_matrix(job, records, attributes, matcher, g.workers);
  emit(o.out, matrix.to_csv(), out);
}

}  // namespace prag::cli
