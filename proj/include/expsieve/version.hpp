#pragma once

namespace expsieve {

inline constexpr const char* kToolVersion = "expsieve 0.1.0";

} // namespace expsieve
