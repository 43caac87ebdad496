#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dfakit {

// Input text could not be parsed; line numbers are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A configured resource budget (memory, state count, time) would be exceeded.
class ResourceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dfakit
