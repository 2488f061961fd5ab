#pragma once

#include <string>
#include <vector>

namespace nlg::cli {

/// Exit codes: 0 every selected suite passed, 1 a suite failed,
/// 2 usage or model-file error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

int run(int argc, const char* const* argv);

}  // namespace nlg::cli
