#pragma once

namespace sindyforge {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sindyforge
