#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace delayosc {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two trig parts at different frequencies were combined. This signals
/// internal misuse of the algebra, never bad user input.
class FrequencyMismatch : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Evaluation requested beyond the built horizon K*tau.
class OutOfHorizon : public Error {
public:
    using Error::Error;
};

class ExpressionError : public Error {
public:
    using Error::Error;
};

/// Parse failure; carries the byte offset of the offending token.
class SyntaxError : public ExpressionError {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : ExpressionError(what + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Identifier outside {t, sin, cos, exp}.
class UnknownIdentifier : public ExpressionError {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : ExpressionError("unknown identifier '" + name + "' (at offset " +
                          std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Runtime evaluation failure (division producing a non-finite value).
class EvalError : public ExpressionError {
public:
    using ExpressionError::ExpressionError;
};

}  // namespace delayosc
