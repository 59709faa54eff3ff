#pragma once

#include <ostream>

namespace shadiv::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kInconclusive = 2;
inline constexpr int kUnsupportedPrime = 3;
inline constexpr int kInputError = 4;

/// Runs one command line; output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shadiv::cli
