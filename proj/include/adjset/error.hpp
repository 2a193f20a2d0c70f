#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace adjset {

enum class ErrorKind {
    InvalidArgument,
    DuplicateName,
    DuplicateEdge,
    SelfLoop,
    ClassViolation,
    NotADag,
    ClassUnsupported,
    GraphTooLarge,
    NotDefiniteStatus,
    NotDirectedEdge,
    NonChordalCircleComponent,
    TooManyExtensions,
    NotDescendral,
    NotSuperSetOfForb,
    NotStandardized,
    SingularSystem,
    SingularRegression,
    NoWitnessFound,
    Parse,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this one exception type.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::vector<std::size_t> witness = {})
        : std::runtime_error(what), kind_(kind), witness_(std::move(witness)) {}

    ErrorKind kind() const noexcept { return kind_; }
    // Node ids of a witness cycle or edge, when the error has one.
    const std::vector<std::size_t>& witness() const noexcept { return witness_; }

private:
    ErrorKind kind_;
    std::vector<std::size_t> witness_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& expected)
        : Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": expected " + expected),
          line_(line), column_(column), expected_(expected) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string expected_;
};

} // namespace adjset
