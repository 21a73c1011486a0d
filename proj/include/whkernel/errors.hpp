#pragma once

#include <stdexcept>
#include <string>

namespace wh {

// Parameter/configuration problems: bad rates, unstable systems, malformed
// run configs. CLI maps these to exit code 2.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Failures of the numerical machinery itself: no sign change, divergent
// integral, non-convergent series. CLI maps these to exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wh
