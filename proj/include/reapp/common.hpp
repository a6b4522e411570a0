#pragma once

#include <stdexcept>
#include <string>

namespace reapp {

// Invalid inputs, schemas, shapes, configs.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg)
        : std::runtime_error(msg) {}
};

// NaN/Inf appearing in a computation, zero-probability gold, etc.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace reapp
