#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace niekf {

/// Exit statuses of `dispatch`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCsv = 3;

/// Entry point of the `niekf` tool: simulate, estimate, compare,
/// observability and rmse subcommands. `args[0]` is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace niekf
