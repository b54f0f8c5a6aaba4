#ifndef QASRL_CLI_H_
#define QASRL_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace qasrl {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolations = 1,  // validation violations in the input
  kExitUsage = 2,       // bad flags, unreadable or malformed files
};

// Runs one subcommand (validate, eval, iaa, stats, cost, consolidate,
// propbank, convert). `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace qasrl

#endif  // QASRL_CLI_H_
