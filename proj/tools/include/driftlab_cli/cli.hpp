#pragma once

#include <iosfwd>

namespace driftlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// driftlab <subcommand> --config <path> [--seed N] [--out DIR] [--spacing T] [--threads K]
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace driftlab::cli
