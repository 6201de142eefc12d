#pragma once

#include <stdexcept>
#include <string>

namespace autores {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise malformed numeric input.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain where an operation is defined (e.g. tau <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Parameters at which the series recurrence is singular (delta = 1).
class DegenerateParameters : public Error {
public:
    using Error::Error;
};

/// Adaptive step size collapsed below the underflow threshold.
class StiffnessError : public Error {
public:
    using Error::Error;
};

/// Least-squares fit could not be formed from the supplied samples.
class FitError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration (missing/unknown keys, bad descriptors).
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace autores
