#pragma once

namespace kerrpol {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kerrpol
