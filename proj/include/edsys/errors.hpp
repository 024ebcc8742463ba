#pragma once

#include <stdexcept>
#include <string>

namespace edsys {

/// Bad input: a parameter, config key, index or precondition is out of range.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to meet its contract (non-convergence, caps).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace edsys
