#pragma once

// Command-line front end. `run` is the whole program minus process exit so
// tests can drive it in-process.
//
// Exit codes: 0 accept/success, 1 reject, 2 usage or I/O error, 3 internal error.

#include <ostream>
#include <string>
#include <vector>

namespace polc::cli {

enum ExitCode : int { kAccept = 0, kReject = 1, kUsage = 2, kInternal = 3 };

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polc::cli
