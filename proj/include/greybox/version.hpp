#pragma once

#include <string_view>

namespace greybox {

inline constexpr std::string_view kToolName = "greybox";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace greybox
