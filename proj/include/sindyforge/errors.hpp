#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sindyforge {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, schemas, or configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or numerically unusable data (CLI exit code 1).
class DataError : public Error {
public:
    using Error::Error;
};

/// API called in the wrong state (e.g. derivatives required but absent).
class StateError : public Error {
public:
    using Error::Error;
};

/// A simulation produced a non-finite state. Carries the first bad sample.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t sample_index)
        : Error(what), sample_index(sample_index) {}

    std::size_t sample_index;
};

} // namespace sindyforge
