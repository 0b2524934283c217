#ifndef SHIFTNUM_CLI_HPP
#define SHIFTNUM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace shiftnum::cli {

/// Parses argv, runs one subcommand and writes its report to `out`.
/// Returns 0 iff parsing succeeded and every internal check passed; errors
/// go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with args excluding the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shiftnum::cli

#endif
