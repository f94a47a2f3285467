#pragma once

namespace histocr {

inline constexpr const char* kVersion = "0.1.0";

} // namespace histocr
