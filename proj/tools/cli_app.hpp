#pragma once

#include <iosfwd>

namespace cki::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_failure = 2,
    exit_over_cap = 3,
};

/// Runs the command line; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cki::cli
