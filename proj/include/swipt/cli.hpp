#pragma once

#include <ostream>
#include <string>
#include <vector>

// swipt-opt front end. Exit codes: 0 success (evaluate/optimize/grid: the
// reported point is feasible), 1 infeasible result, 2 usage, configuration or
// validation error, 3 the model failed to converge.

namespace swipt::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_infeasible = 1;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_nonconvergence = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swipt::cli
