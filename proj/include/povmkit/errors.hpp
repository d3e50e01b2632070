#pragma once

#include <stdexcept>
#include <string>

namespace povmkit {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape or size mismatch between operands.
struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Input violates a mathematical precondition (not Hermitian, not a POVM, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// An internal consistency check failed beyond tolerance.
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(what) {}
};

/// Malformed external input (JSON, CSV, command line).
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace povmkit
