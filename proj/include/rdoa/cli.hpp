#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdoa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericError = 2;

/// Environment variable naming the directory that receives
/// `<subcommand>.csv` when --output is not given.
inline constexpr const char* kOutputDirEnv = "RDOA_OUTPUT_DIR";

/// Runs one subcommand. args excludes the program name. CSV goes to --output,
/// to $RDOA_OUTPUT_DIR/<subcommand>.csv, or to `out`, in that order.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdoa::cli
