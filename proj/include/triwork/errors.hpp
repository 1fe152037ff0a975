#pragma once

#include <stdexcept>
#include <string>

namespace triwork {

// Base of every error raised by the library. CLI exit codes are derived from
// the concrete subclass (see cli.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArity : public Error {
public:
    using Error::Error;
};

class NormalizationError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// An operation's stated precondition does not hold (e.g. odd shot count for
// the pairwise protocol).
class PreconditionError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// A DensityMatrix / PureState invariant failed. what() names the invariant.
class InvariantViolation : public Error {
public:
    InvariantViolation(std::string invariant, const std::string& detail)
        : Error("invariant violated: " + invariant + " (" + detail + ")"),
          invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

// Raised by conditional_state when the requested branch has probability
// below the cutoff; callers skip the branch (0 log 0 = 0).
class ZeroProbabilityBranch : public Error {
public:
    explicit ZeroProbabilityBranch(double probability)
        : Error("zero-probability branch (p = " + std::to_string(probability) + ")"),
          probability_(probability) {}

    double probability() const noexcept { return probability_; }

private:
    double probability_;
};

// Quadrature did not converge: successive resolutions differ by more than tol.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double coarse, double fine, double tol)
        : Error(what + ": |" + std::to_string(coarse) + " - " + std::to_string(fine) +
                "| > " + std::to_string(tol)),
          coarse_(coarse), fine_(fine), tol_(tol) {}

    double coarse() const noexcept { return coarse_; }
    double fine() const noexcept { return fine_; }
    double tol() const noexcept { return tol_; }

private:
    double coarse_;
    double fine_;
    double tol_;
};

// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

class NumericalIntegrityError : public Error {
public:
    using Error::Error;
};

class NoThresholdError : public Error {
public:
    using Error::Error;
};

class MonotonicityError : public Error {
public:
    using Error::Error;
};

} // namespace triwork
