#pragma once

#include <string_view>

namespace lppl {

inline constexpr std::string_view kToolName = "lppl";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace lppl
