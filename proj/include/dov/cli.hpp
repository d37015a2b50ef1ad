#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dov {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

/// Runs the command line `args` (args[0] is the program name). Output goes to
/// `out` unless --out is given; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace dov
