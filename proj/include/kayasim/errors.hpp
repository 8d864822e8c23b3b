#pragma once

#include <stdexcept>
#include <string>

namespace kayasim {

/// Raised when an input value violates a domain invariant. The message
/// always names the offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a simulation cannot proceed (e.g. the perturbation redraw
/// guard trips because sigma is pathologically large).
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on filesystem-level failures: missing files, unwritable paths.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kayasim
