#pragma once

#include <string>
#include <vector>

namespace maxproj::cli {

/// Runs one CLI invocation. Exit codes: 0 success, 1 verification failed,
/// 2 bad input, 3 solver undetermined.
int dispatch(const std::vector<std::string>& args);

}  // namespace maxproj::cli
