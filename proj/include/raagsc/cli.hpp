#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace raagsc::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kError = 1, kGuard = 2, kCheckFailed = 3 };

// Runs one command; the JSON or CSV report goes to `out`, diagnostics to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);  // args exclude argv[0]

}  // namespace raagsc::cli
