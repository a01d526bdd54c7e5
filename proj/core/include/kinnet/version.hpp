#pragma once

#include <string_view>

namespace kinnet {

inline constexpr std::string_view kToolName = "kinnet";
inline constexpr std::string_view kToolVersion = "0.1.0";

} // namespace kinnet
