#include "cli/app.h"

#include <exception>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "cli/config.h"
#include "prag/error.h"

namespace prag::cli {
namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNotFound:
    case ErrorCode::kFailedPrecondition:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void add_decode_options(CLI::App& cmd, DecodeOptions& o) {
  cmd.add_option("--speaker", o.speaker, "Speaker model file");
  cmd.add_option("--data", o.data, "Dataset to decode (JSONL or E2E CSV)");
  cmd.add_option("--train-data", o.train_data,
                 "Training dataset for value frequencies (mask-all policy)");
  cmd.add_option("--out", o.out, "Output file (stdout when omitted)");
  cmd.add_option("--preset", o.preset, "Decoding defaults: mr | summarization")
      ->check(CLI::IsMember({"mr", "summarization"}));
  cmd.add_option("--beam", o.beam, "Beam size");
  cmd.add_option("--max-len", o.max_len, "Maximum output length");
  cmd.add_option("--alpha", o.alpha, "Distractor rationality");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Pragmatically informative text generation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--config", global.config, "JSON config file");
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--workers", global.workers, "Decoding worker threads")
      ->check(CLI::Range(1, 1024));
  app.add_option("--schema", global.schema,
                 "Attribute schema JSON (built-in E2E schema by default)");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory");
  synth_cmd->add_option("--grammar", synth.grammar, "Grammar JSON");
  synth_cmd->add_option("--train", synth.train, "Training records");
  synth_cmd->add_option("--dev", synth.dev, "Development records");
  synth_cmd->add_option("--test", synth.test, "Test records");
  synth_cmd->add_option("--omission-rate", synth.omission_rate,
                        "Clause omission rate (overrides the grammar)");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--kind", train.kind, "speaker | listener | ensemble")
      ->check(CLI::IsMember({"speaker", "listener", "ensemble"}));
  train_cmd->add_option("--listener-type", train.listener_type,
                        "attribute | reverse")
      ->check(CLI::IsMember({"attribute", "reverse"}));
  train_cmd->add_option("--data", train.data, "Training dataset");
  train_cmd->add_option("--out", train.out, "Model file to write");
  train_cmd->add_option("--order", train.order, "n-gram order");
  train_cmd->add_option("--k", train.k, "Smoothing constant");
  train_cmd->add_option("--members", train.members,
                        "Two speaker files (ensemble)");
  train_cmd->add_option("--w", train.w, "Ensemble weight of the first member");

  DecodeOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Decode a dataset");
  add_decode_options(*gen_cmd, gen);
  gen_cmd->add_option("--listener", gen.listener, "Listener model file");
  gen_cmd->add_option("--mode", gen.mode, "base | reconstructor | distractor")
      ->check(CLI::IsMember({"base", "reconstructor", "distractor"}));
  gen_cmd->add_option("--lambda", gen.lambda, "Reconstructor rationality");
  gen_cmd->add_option("--distractor-policy", gen.distractor_policy,
                      "mask-all | mask-single:<attr> | previous-unit | none");

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions");
  eval_cmd->add_option("--predictions", eval.predictions, "Predictions JSONL");
  eval_cmd->add_option("--data", eval.data, "Reference dataset");
  eval_cmd->add_option("--out", eval.out, "Metrics JSON (stdout when omitted)");
  eval_cmd->add_option("--metrics", eval.metrics, "bleu, rouge_l, coverage")
      ->delimiter(',');

  DecodeOptions abl;
  auto* abl_cmd = app.add_subcommand("ablate", "Single-attribute masking");
  add_decode_options(*abl_cmd, abl);
  abl_cmd->add_option("--attributes", abl.attributes,
                      "Measured attributes (non-delexicalized by default)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!global.config.empty()) apply_config_file(app, *cmd, global.config);
    if (cmd == synth_cmd) {
      cmd_synth(global, synth, out);
    } else if (cmd == train_cmd) {
      cmd_train(global, train, out);
    } else if (cmd == gen_cmd) {
      cmd_generate(global, gen, out);
    } else if (cmd == eval_cmd) {
      cmd_evaluate(global, eval, out);
    } else {
      cmd_ablate(global, abl, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace prag::cli
