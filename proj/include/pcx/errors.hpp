#pragma once

#include <stdexcept>
#include <string>

namespace pcx {

/// Base class for all pcx errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation was evaluated outside its mathematical domain
/// (division by an interval containing zero, sqrt of a negative, ...).
struct DomainError : Error {
    using Error::Error;
};

/// A box with no positive-width dimension was asked to split.
struct DegenerateBoxError : Error {
    using Error::Error;
};

/// A caller violated a documented precondition.
struct PreconditionError : Error {
    using Error::Error;
};

/// A numeric computation produced a non-finite value.
struct NumericalError : Error {
    using Error::Error;
};

/// Expression text could not be parsed. `position` is the byte offset
/// into the input where the error was detected.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : Error(what), position(pos) {}
};

} // namespace pcx
