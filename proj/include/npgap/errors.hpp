#pragma once

#include <stdexcept>
#include <string>

namespace npgap {

// Bad input: odd N, overlapping curves, non-positive gap, probe inside an inclusion.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A measured invariant missed its tolerance. Maps to CLI exit code 3.
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration did not converge, singular system, eigensolver failure.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Point too close to a boundary for direct quadrature.
struct NearZoneError : DomainError {
    using DomainError::DomainError;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace npgap
