#pragma once

#include <stdexcept>
#include <string>

namespace fxmjd {

// Invalid inputs: bad matrices, out-of-domain parameters, malformed files.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The Esscher root search cannot reach the requested K0.
class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fxmjd
