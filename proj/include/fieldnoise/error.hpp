#pragma once

#include <stdexcept>
#include <string>

namespace fieldnoise {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad file, violated invariant).
class InputError : public Error {
public:
    using Error::Error;
};

/// A computation that could not produce a trustworthy number.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Sideband probabilities outside the range where n = P_rsb/(P_bsb - P_rsb) is valid.
class DegenerateThermometry : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InsufficientData : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

} // namespace fieldnoise
