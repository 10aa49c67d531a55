#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causalnet {

// Runs one CLI invocation (args excludes the program name) writing results to
// out and diagnostics to err. Exit codes: 0 success / positive verdict,
// 1 negative verdict, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causalnet
