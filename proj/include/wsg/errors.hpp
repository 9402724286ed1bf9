#pragma once

#include <stdexcept>
#include <string>

namespace wsg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a precondition (bad q, bad index, bad weights...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The least-squares system could not be solved (over-parameterized or singular).
class DesignFailure : public Error {
public:
    using Error::Error;
};

/// A signal is too short for the requested operation.
class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace wsg
