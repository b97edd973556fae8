#pragma once

namespace specbill {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace specbill
