#pragma once

namespace sixcyl {

inline constexpr const char* version = "0.1.0";

} // namespace sixcyl
