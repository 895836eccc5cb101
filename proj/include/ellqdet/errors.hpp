#pragma once

#include <stdexcept>
#include <string>

namespace ellqdet {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain where a product or series converges.
class DomainError : public Error {
public:
    using Error::Error;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

/// A denominator theta/Pochhammer factor vanished (spectral point on a zero lattice).
class PoleError : public Error {
public:
    using Error::Error;
};

class KindError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace ellqdet
