#pragma once

#include <string_view>

namespace lyap {

inline constexpr std::string_view kToolName = "lyapsearch";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace lyap
