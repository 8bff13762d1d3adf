#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hardrank {

/// Bad input: malformed files, invalid arguments, violated preconditions.
/// The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A malformed line in one of the text formats.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& detail, const std::string& source = {})
        : InputError((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " + detail),
          line_(line), detail_(detail) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

/// The same key (query/doc pair, doc id) occurred twice.
class DuplicateError : public InputError {
public:
    using InputError::InputError;
};

/// Failure while doing work on valid input (generator unreachable, I/O).
/// The CLI maps these to exit code 2.
class RuntimeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hardrank
