#pragma once

#include <stdexcept>
#include <string>

namespace specinfer {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input does not match an expected schema or format.
class ParseError : public Error {
public:
    using Error::Error;
};

// Input parsed but violates a model invariant (e.g. a hierarchy cycle).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Unknown class or method.
class LookupError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// A similarity backend could not be reached or answered badly.
class TransportError : public Error {
public:
    using Error::Error;
};

}  // namespace specinfer
