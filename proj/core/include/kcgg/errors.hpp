#pragma once

#include <stdexcept>
#include <string>

namespace kcgg {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not conform (tensor ops, FK input, trajectory layout).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or input file content.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// API misuse: a documented precondition of a call was violated.
class ContractError : public Error {
public:
    using Error::Error;
};

/// File read/write failure or malformed on-disk format.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace kcgg
