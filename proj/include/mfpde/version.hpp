#pragma once

namespace mfpde {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mfpde
