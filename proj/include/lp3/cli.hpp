// Command-line front end.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lp3 {

/// Exit codes: 0 success or model, 1 check failed or bug found, 2 usage or
/// parse error, 3 inconclusive because the budget ran out.
enum ExitCode : int { kExitOk = 0, kExitFound = 1, kExitUsage = 2, kExitBudget = 3 };

/// Runs one command; args exclude the program name.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lp3
