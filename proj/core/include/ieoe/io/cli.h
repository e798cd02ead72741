#ifndef IEOE_IO_CLI_H_
#define IEOE_IO_CLI_H_

#include <iosfwd>

namespace ieoe::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitEstimatorFailure = 4;

// Environment variable naming the output directory used when neither --out
// nor outputs.dir is given.
inline constexpr const char* kOutDirEnv = "IEOE_OUT_DIR";

// Entry point of the `ieoe` command: synth, classification, realworld and
// report subcommands. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace ieoe::io

#endif  // IEOE_IO_CLI_H_
