#pragma once

namespace gqlc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gqlc
