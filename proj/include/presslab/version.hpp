#pragma once

namespace presslab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace presslab
