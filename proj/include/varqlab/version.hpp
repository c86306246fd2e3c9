#pragma once

namespace varqlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace varqlab
