#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ocular::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInput = 2,
    kDegenerate = 3,
};

/// Runs one `ocular` command. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ocular::cli
