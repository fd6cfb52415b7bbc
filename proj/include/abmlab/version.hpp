#pragma once

namespace abmlab {

inline constexpr const char* kVersion = "0.1.0";

// Format version stamped into every CSV/JSON artifact written by the library.
inline constexpr int kFormatVersion = 1;

}  // namespace abmlab
