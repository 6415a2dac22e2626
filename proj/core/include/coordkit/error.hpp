#pragma once

#include <stdexcept>
#include <string>

namespace coordkit {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes: input/config problems -> 2, computation problems -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input side.
class SchemaError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Computation side.
class ParameterError : public Error {
public:
    using Error::Error;
};

class ComputationError : public Error {
public:
    using Error::Error;
};

// Raised by range_normalize when max == min. Callers decide whether to fall
// back to the constant-zero policy.
class DegenerateRange : public ComputationError {
public:
    using ComputationError::ComputationError;
};

}  // namespace coordkit
