#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heckepair::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitInvalid = 3;

// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heckepair::cli
