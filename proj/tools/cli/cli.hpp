#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mmsbayes::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

// Entry point shared by main() and the tests. args excludes the program name.
// Errors go to `err` as one line: "error: usage: ..." or "error: data: ...".
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mmsbayes::cli
