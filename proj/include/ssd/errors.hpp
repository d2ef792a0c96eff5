// Error taxonomy shared across the library. The CLI maps each class to a
// distinct exit code.

#pragma once

#include <stdexcept>
#include <string>

namespace ssd {

// Malformed or inconsistent input data (files, panels, series).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad run configuration (flags, config files, illegal combinations).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Optimisation failures: infeasible bounds, iteration caps, numerical trouble.
class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ssd
