#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridlab {

/// Base of every error raised by the model.
class GridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input row. Carries the 1-based line number of the offending row.
class ParseError : public GridError {
public:
    ParseError(std::size_t line, const std::string& what)
        : GridError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class CadenceError : public GridError {
public:
    using GridError::GridError;
};

class IntegrityError : public GridError {
public:
    using GridError::GridError;
};

class ParameterError : public GridError {
public:
    using GridError::GridError;
};

/// A requested target cannot be reached; `ceiling()` is the best attainable value.
class InfeasibleError : public GridError {
public:
    InfeasibleError(const std::string& what, double ceiling)
        : GridError(what), ceiling_(ceiling) {}
    double ceiling() const noexcept { return ceiling_; }

private:
    double ceiling_;
};

class DegenerateShapeError : public GridError {
public:
    using GridError::GridError;
};

class UndefinedCostError : public GridError {
public:
    using GridError::GridError;
};

}  // namespace gridlab
