#pragma once

namespace chainforge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chainforge
