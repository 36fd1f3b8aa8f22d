#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kk::cli {

// Parses and runs one invocation. Writes results (or a machine-readable
// error object) to `out`; returns the process exit status: 0 on success,
// 2 on usage errors, 1 on domain/numerical errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out);

}  // namespace kk::cli
