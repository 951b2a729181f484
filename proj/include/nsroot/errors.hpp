#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsroot {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input (malformed literals, wrong point counts, ...).
struct InputError : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

// Argument outside the mathematical domain of an operation (ln of a
// non-positive value, sqrt of a negative value, pole of an expression).
struct DomainError : Error {
    using Error::Error;
};

// An operation produced a non-finite value (overflow to infinity, NaN).
struct NonFiniteError : Error {
    using Error::Error;
};

struct ParseError : Error {
    std::size_t position;
    std::string expected;

    ParseError(std::size_t pos, std::string expected_tokens)
        : Error("parse error at offset " + std::to_string(pos) + ": expected " + expected_tokens),
          position(pos),
          expected(std::move(expected_tokens)) {}
};

// Appending a node that coincides with an existing one; for the iterative
// methods this means the iteration has revisited an iterate exactly.
struct DuplicateNode : Error {
    std::size_t existing_index;

    explicit DuplicateNode(std::size_t index)
        : Error("node coincides with existing node #" + std::to_string(index)),
          existing_index(index) {}
};

struct DerivativeVanished : Error {
    DerivativeVanished() : Error("derivative vanished at the current iterate") {}
};

struct DenominatorVanished : Error {
    DenominatorVanished() : Error("update-rule denominator vanished at the current iterate") {}
};

struct InsufficientData : Error {
    using Error::Error;
};

}  // namespace nsroot
