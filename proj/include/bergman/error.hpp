#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or malformed input (bad exponents, y <= 0, parse errors).
class InputError : public Error {
public:
    using Error::Error;
};

/// Non-finite integrand sample or a measure that cannot be formed (alpha <= -1).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An integral is infinite; detected from the analytic origin/tail exponents.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Adaptive refinement ran out of depth before reaching the requested tolerance.
class ToleranceError : public Error {
public:
    ToleranceError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

/// A box average has a zero or infinite denominator.
class DegenerateAverageError : public Error {
public:
    using Error::Error;
};

/// A box integral of the weight (or of its dual power) diverges on some interval.
class WeightNotInClassError : public Error {
public:
    using Error::Error;
};

/// The Schur parameter search has no feasible point.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

}  // namespace bergman
