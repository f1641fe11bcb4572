#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secord::cli {

enum ExitCode : int {
    ok = 0,
    violation = 1,
    usage = 2,
    resource = 3,
    file_error = 4,
};

/// Runs one `secord` invocation. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace secord::cli
