#pragma once

namespace sinelat {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sinelat
