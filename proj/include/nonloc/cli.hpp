#ifndef NONLOC_CLI_HPP
#define NONLOC_CLI_HPP

#include <string>
#include <vector>

namespace nonloc {

/** Parse "lo:hi:count" into a grid (log-spaced or linear); a bare number
 * yields a single-point grid. */
std::vector<double> parse_range(const std::string& text, bool log_spaced);

/** Subcommand dispatcher. Exit codes: 0 success, 2 validation error,
 * 3 solver nonconvergence, 4 verification failure, 64 usage error. */
int run_cli(int argc, char** argv);

}  // namespace nonloc

#endif
