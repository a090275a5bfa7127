#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace efw::cli {

enum ExitCode : int {
    kOk = 0,
    kUnexpected = 1,
    kInputError = 2,
    kRegionNotFound = 3,
    kFitFailure = 4,
};

/// Runs one command. `args` excludes the program name. Human-readable output
/// goes to `out`; failures print one "error code=<n> kind=<k> message=..." line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace efw::cli
