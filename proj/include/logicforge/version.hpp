#pragma once

namespace logicforge {

inline constexpr const char* kVersion = "0.1.0";

} // namespace logicforge
