#pragma once

namespace spotlight {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace spotlight
