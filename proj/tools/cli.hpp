#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nonlocal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Runs `nonlocal-lab` with args (program name excluded). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nonlocal::cli
