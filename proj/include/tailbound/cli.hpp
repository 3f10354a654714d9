#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tailbound::cli {

/// Exit codes: 0 success, 1 validation or numerical failure, 2 usage or domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tailbound::cli
