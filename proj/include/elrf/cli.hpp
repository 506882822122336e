#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elrf {

/// Command dispatch used by the elrf binary and the test suite.
/// Exit codes: 0 = verdict computed (YES or NO), 2 = input error,
/// 3 = resource cap exceeded, 1 = internal failure.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elrf
