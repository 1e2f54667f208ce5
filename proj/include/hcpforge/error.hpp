#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcpforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A tour or certificate does not even have the right shape for the instance
/// it is checked against (as opposed to a well-formed tour that is simply not
/// a Hamiltonian cycle).
class InvalidCertificate : public Error {
public:
    using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An internal invariant was broken. Always a bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace hcpforge
