#ifndef PRAG_CLI_APP_H_
#define PRAG_CLI_APP_H_

#include <ostream>
#include <string>
#include <vector>

namespace prag::cli {

// Exit codes of the prag tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

// Parses argv (argv[0] is the program name), runs the selected command and
// returns its exit code. Diagnostics go to `err`, summaries to `out`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace prag::cli

#endif  // PRAG_CLI_APP_H_
