#pragma once

#include <stdexcept>
#include <string>

namespace platelab {

// Bad caller-supplied data (non-finite entries, nonpositive weights, ...).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// An iteration failed to converge within its fixed bound.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A truncated expansion (Fourier mode list) was provably insufficient.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file problems; message carries the line number where known.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The spectral gap hypothesis lambda_{k+1} > lambda_k is violated.
struct gap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation not available for the requested geometry.
struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degenerate metric or similar analytic breakdown.
struct singularity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Returned numbers contradict an internal invariant (should not happen).
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace platelab
