#ifndef PRAG_CLI_CONFIG_H_
#define PRAG_CLI_CONFIG_H_

#include <filesystem>

namespace CLI {
class App;
}

namespace prag::cli {

// Reads a flat JSON object whose keys are long option names with '-'
// spelled '_' (e.g. "out_dir", "distractor_policy"). Every key must name an
// option of the tool; values fill options of the root app and of the
// selected subcommand that were not given on the command line. Arrays feed
// multi-valued options.
void apply_config_file(CLI::App& app, CLI::App& command,
                       const std::filesystem::path& path);

}  // namespace prag::cli

#endif  // PRAG_CLI_CONFIG_H_
