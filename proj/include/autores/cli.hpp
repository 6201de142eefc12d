#pragma once

// Configuration-driven command-line front end.
//   autores <simulate|asymptotics|certify|basin|montecarlo|duffing>
//           --config PATH [--out DIR] [--workers N] [--seed S]

#include <iosfwd>

namespace autores {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kToolVersion = "1.0.0";

/// Runs one CLI invocation; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace autores
