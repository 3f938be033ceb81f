#ifndef SCCC_CLI_HPP
#define SCCC_CLI_HPP

#include <string>
#include <vector>

namespace sccc {

// Front end used by the sccc binary and by the test suites.  Returns the
// process exit code: 0 success, 2 configuration error, 3 cap or feasibility
// error, 4 internal failure (including a failed oracle cross-check).
int run_cli(const std::vector<std::string>& args);

}  // namespace sccc

#endif
