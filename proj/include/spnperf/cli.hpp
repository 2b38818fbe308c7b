#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spnperf::cli {

// Exit codes of the spnperf tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitAnalysisFailed = 3;

// Runs the tool with args (excluding the program name), writing results to
// out and diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spnperf::cli
