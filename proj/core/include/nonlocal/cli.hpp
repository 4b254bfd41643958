#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nonlocal::cli {

/// Subcommand dispatch for {certify, solve, reduce, degree, integrate,
/// selftest}. Writes result documents to `out` and messages to `err`.
/// Exit codes: 0 success/certified, 2 checks failed (witness in the JSON
/// output), 1 usage or configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nonlocal::cli
