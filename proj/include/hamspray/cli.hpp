#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hamspray {

/// Runs one command line (without the program name). Exit status: 0 when
/// every check passes, 1 when a check fails, 2 on input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamspray
