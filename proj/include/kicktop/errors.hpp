// errors.hpp: exception hierarchy shared by all kicktop modules
#pragma once

#include <stdexcept>
#include <string>

namespace kicktop {

// Invalid user input or parameters (config, ranges, shapes). Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (non-converged eigensolver, broken invariant). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChannelRangeError : public InputError {
public:
    using InputError::InputError;
};

class IncompatibleScaleError : public InputError {
public:
    using InputError::InputError;
};

class ShapeError : public InputError {
public:
    using InputError::InputError;
};

class DegenerateSystemError : public InputError {
public:
    using InputError::InputError;
};

class DomainError : public InputError {
public:
    using InputError::InputError;
};

class ConsistencyError : public InputError {
public:
    using InputError::InputError;
};

class ConfigError : public InputError {
public:
    ConfigError(const std::string& what, int line = 0)
        : InputError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace kicktop
