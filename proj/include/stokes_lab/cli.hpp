#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stokes_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the stokes-lab tool. `args` excludes the program name.
/// Returns 0 on success, 1 when an expectation fails, 2 on configuration or usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count for `check`: STOKES_LAB_THREADS when set (must be a positive
/// integer), otherwise the hardware concurrency.
unsigned worker_count();

}  // namespace stokes_lab::cli
