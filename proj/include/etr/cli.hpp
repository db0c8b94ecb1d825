#pragma once
// Command-line front end: `recognize`, `synth`, `ablate`, `eval` and
// `dump-context`.
//
// Exit codes: 0 success, 1 configuration error (bad flags, missing paths),
// 2 data error (malformed or inconsistent input), 3 internal error.

#include <iosfwd>

namespace etr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace etr
