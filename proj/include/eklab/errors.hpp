#pragma once

#include <stdexcept>
#include <string>

namespace eklab {

// Bad user input: unknown config keys, inadmissible parameters, window violations.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical assertion failed beyond its tolerance budget (asserted inequality
// violated, NaN in a flux, ...). The CLI maps this to exit code 1.
struct NumericalFailure : std::runtime_error {
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace eklab
