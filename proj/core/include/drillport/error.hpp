#pragma once

#include <stdexcept>
#include <string>

namespace drillport {

/// Raised for malformed or out-of-range caller input (bad arguments, bad rows).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a run configuration cannot describe a solvable problem.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace drillport
