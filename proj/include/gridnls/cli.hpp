// Command-line driver shared by the gridnls executable and the tests.
#pragma once

#include <ostream>

namespace gridnls {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Subcommands: minimize, kp, critical-mass, sweep, check, testfn.
/// `--config FILE.json` supplies defaults for any flag not given explicitly.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gridnls
