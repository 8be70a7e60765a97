#ifndef JXBW_TOOLS_CLI_HPP
#define JXBW_TOOLS_CLI_HPP

#include <iosfwd>

namespace jxbw::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kDisagreement = 3,
};

/// Entry point of the `jxbw` command; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jxbw::cli

#endif  // JXBW_TOOLS_CLI_HPP
