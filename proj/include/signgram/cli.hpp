#pragma once

#include <iosfwd>

namespace signgram::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one `signgram <subcommand> ...` invocation. Results go to `out`,
// diagnostics to `err`. Returns 0 on success, 1 on usage errors and 2 on
// data errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace signgram::cli
