#pragma once

#include <iosfwd>

namespace jetad::cli {

enum ExitCode
{
    ok = 0,
    type_error = 1,
    parse_error = 2,
    oracle_failure = 3,
    usage = 64
};

/// Runs the command line `argv` (argv[0] is the program name), writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace jetad::cli
