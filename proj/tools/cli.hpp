#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cvqb::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kDiverged = 2 };

/// Entry point shared by the executable and the tests. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Named figure presets: (name, flags) pairs for a subcommand.
[[nodiscard]] const std::vector<std::pair<std::string, std::vector<std::string>>>& presets(
    const std::string& subcommand);

/// Expands a grid spec: "v", "a,b,c", "a:b:N" (N linear points), "a:b:geometric" (doubling
/// from a while <= b) or "a:b:geometric:N" (N log-spaced points). Throws std::invalid_argument.
[[nodiscard]] std::vector<double> parse_grid(const std::string& text);

}  // namespace cvqb::cli
