#pragma once

namespace hyperbayes {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hyperbayes
