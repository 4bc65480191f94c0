#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gausskey::cli {

/// Runs the `gausskey` command line with `args` (program name excluded).
/// Returns 0 on success, 1 on domain errors and 2 on flag errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gausskey::cli
