#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ubound {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconsistent = 3;

// args[0] is the program name. Never throws; returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ubound
