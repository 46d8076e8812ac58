#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hivemon {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates a domain invariant (bad box, bad sample, bad config).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A byte stream does not parse; carries the 1-based line number when known.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& message, std::size_t line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// Filesystem / stream failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Authentication key rejected.
class AuthError : public Error {
public:
    using Error::Error;
};

/// Referenced entity does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Telemetry sample is older than (or equal to) the newest stored one.
class OrderingError : public Error {
public:
    using Error::Error;
};

/// Secondary detection references a snapshot that does not exist.
class AssociationError : public Error {
public:
    using Error::Error;
};

/// A metric's denominator is zero; the message names the metric.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

}  // namespace hivemon
