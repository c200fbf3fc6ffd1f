#pragma once

namespace ilbat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ilbat
