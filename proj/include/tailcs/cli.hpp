#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tailcs {

// Dispatches one CLI invocation. Exit codes: 0 success, 2 argument errors,
// 1 computational failure (SizeLimit, RankDeficient, Infeasible, ...).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tailcs
