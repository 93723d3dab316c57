#pragma once

#include <iostream>

namespace dslpn {

// Exit codes: 0 success, 1 invalid input (including unknown subcommands),
// 2 a checked property or acceptance criterion failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCheckFailed = 2;

int runCli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace dslpn
