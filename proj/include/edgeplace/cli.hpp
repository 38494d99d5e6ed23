#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgeplace {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Entry point behind the `edgeplace` binary. `args` excludes the program
/// name. Failures print one JSON object line on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgeplace
