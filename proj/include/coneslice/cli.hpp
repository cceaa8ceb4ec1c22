#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coneslice::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one subcommand. The JSON envelope goes to `out`, human-readable
/// logging to `err`. Returns 0 on success, 1 for malformed input and 2 for
/// domain errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coneslice::cli
