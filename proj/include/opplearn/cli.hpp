#ifndef OPPLEARN_CLI_HPP
#define OPPLEARN_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace opplearn {

inline constexpr const char* kToolVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,       // bad flags, malformed input, invalid combination
  kExitDegenerate = 3,  // data cannot support the requested computation
  kExitNumeric = 4,     // non-finite result or internal failure
};

/// Runs the command line `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opplearn

#endif  // OPPLEARN_CLI_HPP
