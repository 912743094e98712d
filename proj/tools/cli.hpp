#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mosum::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_data = 3,
};

struct Terminal {
    bool color = false; // ANSI colors in the bench table
};

/// Runs one command line. `args` excludes the program name; "-" as a path
/// means `in` / `out`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
            Terminal terminal = {});

} // namespace mosum::cli
