#pragma once

#include <stdexcept>
#include <string>

namespace slowcode {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A length or count is outside its admissible range.
class InvalidDimension : public Error {
public:
    using Error::Error;
};

/// A correlation lag is outside {-(N-1), ..., N-1}.
class InvalidLag : public Error {
public:
    using Error::Error;
};

/// A value violates a type invariant (unimodularity, equal lengths, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A file could not be parsed. The message carries line/field context.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Configuration or scenario values are inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An argument is outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Diagonal loading did not yield a positive-definite matrix.
class LoadingError : public Error {
public:
    using Error::Error;
};

/// A numerical invariant (monotone descent, unit norm, ...) was broken.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace slowcode
