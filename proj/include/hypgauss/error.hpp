#pragma once

#include <stdexcept>
#include <string>

namespace hypgauss {

enum class ErrorKind {
    InvalidInput,
    BoundaryDegeneracy,
    ConvergenceFailure,
    SamplingFailure,
    UnsupportedExactNeighbors,
    MissingNeighbors,
    InvalidUse,
    UnsupportedMode,
    Io,
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::BoundaryDegeneracy: return "boundary degeneracy";
    case ErrorKind::ConvergenceFailure: return "convergence failure";
    case ErrorKind::SamplingFailure: return "sampling failure";
    case ErrorKind::UnsupportedExactNeighbors: return "unsupported exact neighbors";
    case ErrorKind::MissingNeighbors: return "missing neighbors";
    case ErrorKind::InvalidUse: return "invalid use";
    case ErrorKind::UnsupportedMode: return "unsupported mode";
    case ErrorKind::Io: return "i/o error";
    }
    return "unknown error";
}

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Quadrature ran out of subdivisions; carries the best estimate reached.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best, double error_estimate)
        : Error(ErrorKind::ConvergenceFailure, what), best_(best), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_;
    double error_estimate_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::InvalidInput, what);
}

} // namespace detail
} // namespace hypgauss
