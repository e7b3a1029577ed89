#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (alpha <= 0, bad sector index, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A numerical procedure could not produce a value (e.g. no surface representation).
class ComputationError : public Error {
public:
    using Error::Error;
};

// An iterative method stopped before reaching its tolerance.
class IterationError : public Error {
public:
    IterationError(const std::string& what, int iterations, double last_residual)
        : Error(what), iterations_(iterations), last_residual_(last_residual) {}

    int iterations() const { return iterations_; }
    double last_residual() const { return last_residual_; }

private:
    int iterations_;
    double last_residual_;
};

// The nonlinear solver collapsed onto the trivial solution.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

// Malformed input file. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

}  // namespace grushin
