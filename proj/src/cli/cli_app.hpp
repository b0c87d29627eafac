#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigma_lattice::cli {

/// Run the command-line tool. `args` is in natural order without the program
/// name. Returns the process exit code:
///   0 success, 1 selftest failure, 2 usage error,
///   3 domain error (pole, incommensurate point),
///   4 numerical failure (census, convergence, singular basis).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sigma_lattice::cli
