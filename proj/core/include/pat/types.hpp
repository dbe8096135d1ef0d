#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pat {

// Dense real-valued carriers used throughout. All numerics are 64-bit.
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps these onto stable exit codes:
//   ConfigError/DimensionError/DomainError -> 1 (validation)
//   NumericError and subclasses            -> 2 (numeric failure)
//   IoError/ParseError                     -> 3 (I/O)
// ---------------------------------------------------------------------------

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UsageError : std::logic_error {
    using std::logic_error::logic_error;
};

struct UnsupportedOpError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a max-normalization would divide by a non-positive maximum.
struct DegenerateMaxError : NumericError {
    using NumericError::NumericError;
};

struct InsufficientDataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Carries the achieved validation error when a fit misses its quality gate.
struct FitQualityError : NumericError {
    FitQualityError(const std::string& what, double achieved)
        : NumericError(what), achieved_mse(achieved) {}
    double achieved_mse;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : IoError {
    ParseError(const std::string& what, long line) : IoError(what), line_number(line) {}
    long line_number;
};

inline void require_dim(const RealVector& v, Eigen::Index n, const char* what) {
    if (v.size() != n) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) +
                             ", got " + std::to_string(v.size()));
    }
}

inline void require_finite(const RealVector& v, const char* what) {
    if (!v.allFinite()) {
        throw NumericError(std::string(what) + ": non-finite values in output");
    }
}

}  // namespace pat
