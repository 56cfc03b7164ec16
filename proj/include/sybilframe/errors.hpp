#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sybilframe {

// Invalid configuration or parameter combination. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing or inconsistent input data. The CLI maps this to exit code 3.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number of the offending line.
class ParseError : public InputError {
public:
    ParseError(const std::string& message, std::size_t line)
        : InputError(message + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace sybilframe
