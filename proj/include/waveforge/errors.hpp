#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace waveforge {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is a byte offset into the input.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error("syntax error at byte " + std::to_string(position) + ": " + message),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownSymbol : public Error {
public:
    UnknownSymbol(std::size_t position, const std::string& name)
        : Error("unknown symbol '" + name + "' at byte " + std::to_string(position)),
          position_(position), name_(name) {}
    std::size_t position() const noexcept { return position_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t position_;
    std::string name_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Evaluation left the domain of a primitive (log of a non-positive number,
/// division by zero, branch point, non-finite result).
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidInterval : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

class InvalidOrder : public Error {
public:
    using Error::Error;
};

class DegenerateSpeeds : public Error {
public:
    using Error::Error;
};

class NonPositiveSpeed : public Error {
public:
    using Error::Error;
};

class NegativeDiffusionTime : public Error {
public:
    using Error::Error;
};

class DataCountMismatch : public Error {
public:
    using Error::Error;
};

class InvalidBox : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class InsufficientDerivatives : public Error {
public:
    using Error::Error;
};

class IntegratorFailure : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace waveforge
