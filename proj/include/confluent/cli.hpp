// Command-line entry point: gen, solve, oracle, eval, cutcheck, bench.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace confluent {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

// Results go to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confluent
