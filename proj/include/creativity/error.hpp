#pragma once

#include <stdexcept>
#include <string>

namespace creativity {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input data or configuration violates a documented contract.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Out-of-range or unknown configuration value.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A numerical routine cannot produce a result (singular system, size guard).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace creativity
