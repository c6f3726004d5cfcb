#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lexsat {

// Runs one CLI invocation (without the program name). Exit codes: 0 success,
// 1 UNSAT for solve/oracle, 2 usage or parse errors, 3 dispatch-forbidden,
// reduction and other domain errors.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace lexsat
