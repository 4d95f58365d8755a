#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mct::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;  // I/O, format, shape errors
inline constexpr int kExitUsage = 2;    // bad arguments, unknown subcommand

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mct::cli
