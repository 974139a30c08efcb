#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace flmob::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// Runs the command line `args` (without the program name). `env` holds
/// environment variables; only FLMOB_* entries are consulted.
int run(const std::vector<std::string>& args, const std::map<std::string, std::string>& env,
        std::ostream& out, std::ostream& err);

}  // namespace flmob::cli
