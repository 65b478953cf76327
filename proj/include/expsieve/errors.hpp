#pragma once

#include <stdexcept>
#include <string>

namespace expsieve {

// Error taxonomy mirrored by the CLI exit codes: validation -> 2,
// resource cap -> 3, numerical precision -> 4.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace expsieve
