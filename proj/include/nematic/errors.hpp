#pragma once

#include <stdexcept>
#include <string>

namespace nematic {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Evaluation requested outside the interval where a closed form exists
/// (e.g. beta(t) past the vanishing time).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A parameter set breaks one of the barrier admissibility inequalities.
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

/// A linear solve or time step could not be completed.
class NumericFailure : public Error {
public:
    NumericFailure(const std::string& what, double t, double dt)
        : Error(what + " (t=" + std::to_string(t) + ", dt=" + std::to_string(dt) + ")"), t_(t), dt_(dt) {}

    double time() const noexcept { return t_; }
    double step_size() const noexcept { return dt_; }

private:
    double t_;
    double dt_;
};

/// Fitting a singular-time model to monitor data failed.
class EstimationFailure : public Error {
public:
    using Error::Error;
};

} // namespace nematic
