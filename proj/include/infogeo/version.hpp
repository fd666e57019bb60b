#pragma once

namespace infogeo {

inline constexpr const char* kVersion = "0.1.0";

} // namespace infogeo
