#pragma once

#include <stdexcept>
#include <string>

namespace cpilab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A wavelength fell outside a material's validity range.
class ValidityError : public Error {
public:
    using Error::Error;
};

/// A numeric precondition was violated (grid shape, sampling, positivity, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent scenario configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Scan or report file could not be parsed.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace cpilab
