#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hiernet {

enum ExitCode : int {
  kExitOk = 0,
  kExitRejected = 1,
  kExitUsage = 2,
};

/// Runs one `hiernet` invocation; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace hiernet
