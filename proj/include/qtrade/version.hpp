#pragma once

namespace qtrade {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qtrade
