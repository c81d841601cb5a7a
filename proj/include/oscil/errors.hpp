#pragma once

#include <stdexcept>
#include <string>

namespace oscil {

// Malformed external input (text that is not a bit string, bad fraction
// syntax, corrupt container bytes).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates an operation's stated
// precondition (wrong ones-count, shift out of range, ...).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what)
        : std::invalid_argument(what) {}
};

// A computation refused because it would exceed a configured budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace oscil
