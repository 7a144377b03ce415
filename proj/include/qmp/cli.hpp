#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmp {

/// git-describe style version baked in at configure time.
const char* version_string() noexcept;

/// Entry point behind the `qmp` tool. `args` excludes the program name.
/// Exit codes: 0 success, 1 configuration error, 2 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmp
