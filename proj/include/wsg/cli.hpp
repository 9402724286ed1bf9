#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wsg::cli {

/// Process exit codes: stable contract for scripts.
enum ExitCode : int { success = 0, failure = 1, usage = 2 };

struct Streams {
    std::ostream& out;
    std::ostream& err;
    bool color = false; // ANSI status colors in table output
};

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, Streams streams);

} // namespace wsg::cli
