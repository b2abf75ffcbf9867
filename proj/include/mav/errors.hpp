#pragma once

#include <stdexcept>
#include <string>

namespace mav {

// Bad run configuration (missing paths, invalid ranges). CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data. CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failure (rank deficiency, degenerate distributions). CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested in-tick trade exceeds the range's Y-side budget; carries the
// largest tradable amount so callers can clip and continue in the next tick.
struct TickExhausted : std::domain_error {
    double max_dy;
    TickExhausted(const std::string& msg, double max_dy_)
        : std::domain_error(msg), max_dy(max_dy_) {}
};

}  // namespace mav
