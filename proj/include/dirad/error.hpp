#pragma once

#include <stdexcept>
#include <string>

namespace dirad {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV cells, schema lines, model files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Shapes of matrices, vectors or configurations do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A configuration value violates a documented precondition.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dirad
