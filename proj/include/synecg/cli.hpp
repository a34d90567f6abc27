#pragma once

#include <iostream>

namespace synecg::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kConfigError = 3,
  kIoError = 4,
};

/// Entry point behind the `synecg` executable. Subcommands: generate, noise,
/// augment, detect, evaluate, fit-dump. A JSON file given with --config
/// supplies defaults, one object per subcommand; explicit flags win.
int run(int argc, const char* const* argv, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace synecg::cli
