#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mmpass {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document. The message carries the line or field location.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A structurally well-formed object that violates model invariants.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "validation failed";
        for (const auto& s : items) {
            out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

/// Caller passed arguments outside an operation's domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The simplex solver stalled, cycled, or produced a point that fails verification.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Path enumeration exceeded the configured limit.
class PathOverflow : public Error {
public:
    explicit PathOverflow(std::size_t limit)
        : Error("path enumeration exceeded limit of " + std::to_string(limit) +
                " paths; use the edge-based formulation instead"),
          limit_(limit) {}

    std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t limit_;
};

}  // namespace mmpass
