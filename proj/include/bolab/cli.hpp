#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bolab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// bo_lab entry point; `args` excludes the program name. Returns 0 on
/// success, 1 on validation failure (including unknown subcommands) and 2
/// when a numerical guard aborts the run.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fast invariant suite behind `selftest`; one line per check. True if all pass.
bool run_selftest(std::ostream& out);

}  // namespace bolab
