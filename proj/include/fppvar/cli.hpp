#pragma once

#include <iosfwd>

namespace fppvar {

/// Entry point for the fppvar command line.
///
/// Exit codes: 0 success, 1 verification failure or runtime error,
/// 2 usage or domain error. `--config <file>` reads flat key=value lines
/// (# starts a comment) naming options of the selected subcommand; flags
/// given on the command line take precedence.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fppvar
