#ifndef QAUTH_TOOLS_CLI_H
#define QAUTH_TOOLS_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace qauth::cli {

inline constexpr int kExitOk = 0;
/// An analysis guard refused to run, no conditioning event occurred, or a
/// self-test check failed. A report describing the refusal is still written.
inline constexpr int kExitGuard = 1;
/// Unknown flags, malformed family specs or invalid parameters.
inline constexpr int kExitInvalid = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "QAUTH_OUTPUT_DIR";

/// Runs one command line; `args[0]` is the program name.
///
/// The report goes to --output if given, else to
/// $QAUTH_OUTPUT_DIR/<command>.<format> if that variable is set, else to `out`.
/// Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qauth::cli

#endif  // QAUTH_TOOLS_CLI_H
