#ifndef PRAG_CLI_COMMANDS_H_
#define PRAG_CLI_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace prag::cli {

struct GlobalOptions {
  std::string config;
  std::uint64_t seed = 17;
  int workers = 1;
  // Schema file; the built-in E2E schema when empty.
  std::string schema;
};

struct SynthOptions {
  std::string out_dir;
  std::string grammar;
  std::size_t train = 5000;
  std::size_t dev = 500;
  std::size_t test = 500;
  std::optional<double> omission_rate;
};

struct TrainOptions {
  std::string kind = "speaker";
  std::string listener_type = "attribute";
  std::string data;
  std::string out;
  int order = 3;
  std::optional<double> k;
  std::vector<std::string> members;
  double w = 0.5;
};

// Shared by generate and ablate.
struct DecodeOptions {
  std::string speaker;
  std::string listener;
  std::string data;
  std::string train_data;
  std::string out;
  std::string mode = "base";
  std::string preset = "mr";
  std::optional<int> beam;
  std::optional<int> max_len;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::string distractor_policy = "mask-all";
  std::vector<std::string> attributes;
};

struct EvaluateOptions {
  std::string predictions;
  std::string data;
  std::string out;
  std::vector<std::string> metrics = {"bleu", "rouge_l", "coverage"};
};

// Each command throws prag::Error on failure.
void cmd_synth(const GlobalOptions& g, const SynthOptions& o,
               std::ostream& out);
void cmd_train(const GlobalOptions& g, const TrainOptions& o,
               std::ostream& out);
void cmd_generate(const GlobalOptions& g, const DecodeOptions& o,
                  std::ostream& out);
void cmd_evaluate(const GlobalOptions& g, const EvaluateOptions& o,
                  std::ostream& out);
void cmd_ablate(const GlobalOptions& g, const DecodeOptions& o,
                std::ostream& out);

}  // namespace prag::cli

#endif  // PRAG_CLI_COMMANDS_H_
