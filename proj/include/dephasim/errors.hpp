#pragma once

#include <stdexcept>
#include <string>

namespace dephasim {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a precondition (bad value, non-finite input,
/// contract violation such as an expanding dephasing factor).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// A scenario config or serialized object failed schema validation.
/// The message names the offending field.
class ConfigError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// Not enough usable data points for a fit.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// A requested computation exceeds a hard cost cap.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// File I/O failure or malformed on-disk data.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dephasim
