#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esampling::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;

/// Entry point shared by the `esample` binary and the tests. `args` excludes
/// the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a `--values` list: either `start:stop:step` (inclusive) or a
/// comma-separated list. Throws std::invalid_argument.
[[nodiscard]] std::vector<double> parse_values(const std::string& text);

}  // namespace esampling::cli
