#pragma once

#include <stdexcept>
#include <string>

namespace efw {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, options, or sizes.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input text (CSV rows, dates, mixture records).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A requested region does not exist in the input.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Argument outside a function's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (non-finite values, optimizer breakdown).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace efw
