#pragma once

namespace bnm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bnm
