#pragma once

namespace eig {

inline constexpr const char* version = "0.1.0";

} // namespace eig
