#pragma once

#include <stdexcept>
#include <string>

namespace degenbond {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problem data violates the standing assumptions on w and theta.
class InvalidProblem : public Error { using Error::Error; };
class AmbiguousCase : public Error { using Error::Error; };
class DegenerateFactor : public Error { using Error::Error; };
class InvalidMesh : public Error { using Error::Error; };
class NonUniformMesh : public Error { using Error::Error; };
class NumericalOverflow : public Error { using Error::Error; };
class AssemblyError : public Error { using Error::Error; };
class SingularSystem : public Error { using Error::Error; };
class NonFiniteSolution : public Error { using Error::Error; };
class MissingExact : public Error { using Error::Error; };
class RateUndefined : public Error { using Error::Error; };
class SnapshotMissing : public Error { using Error::Error; };

/// Config text could not be tokenized or parsed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                what),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Config parsed but a field holds an unacceptable value.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace degenbond
