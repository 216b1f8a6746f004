#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace refcoef {

/// Command-line entry point without the program name. Exit codes: 0 success,
/// 1 invalid input or usage, 2 numerical failure. Errors go to `err` as a
/// single line "Exxx message".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace refcoef
