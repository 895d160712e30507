#pragma once

#include <ostream>
#include <span>
#include <string>

namespace augbp::cli {

/// Runs one command line (without the program name). Subcommands:
/// `tsp solve|gen|bench` and `cluster solve|bench`. Returns 0 on success,
/// 2 on usage errors and 1 when a command fails.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace augbp::cli
