#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dgbo {

// args excludes the program name. Exit codes: 0 success, 1 runtime failure,
// 2 validation error (bad flags, config keys or parameter ranges).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dgbo
