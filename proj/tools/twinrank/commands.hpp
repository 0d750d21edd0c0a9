#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace twinrank::cli {

/// Process exit codes. 64 and up follow sysexits.h.
enum ExitCode : int {
  kExitOk = 0,
  kExitConformanceFailures = 1,
  kExitHalted = 2,
  kExitUsage = 64,
  kExitDataError = 65,
  kExitInternal = 70,
  kExitIoError = 74,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "TWINRANK_OUT_DIR";

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twinrank::cli
