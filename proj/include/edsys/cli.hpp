#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edsys {

/// Subcommands:
///   run --config PATH [--out DIR]
///   experiment {1|2|3} [--out DIR]
///   sweep --eps LIST --bc LIST [--config PATH] [--out DIR]
///   mms --levels K [--case sine|sine-dirichlet|quadratic]
/// Returns 0 on success, 1 on usage or validation errors, 2 on solver failure.
/// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace edsys
