#pragma once

#include <stdexcept>
#include <string>

namespace sinelat {

/// Kernel operator fails the 0 <= K <= I condition; no point process exists.
struct macchi_violation_error : std::runtime_error {
    explicit macchi_violation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense symmetric eigensolver did not converge.
struct eigensolver_error : std::runtime_error {
    explicit eigensolver_error(const std::string& what) : std::runtime_error(what) {}
};

/// Sequential projection sampling lost basis rank (reported, never repaired).
struct degenerate_basis_error : std::runtime_error {
    explicit degenerate_basis_error(const std::string& what) : std::runtime_error(what) {}
};

/// Test-function tails too heavy for the requested truncation tolerance.
struct insufficient_decay_error : std::runtime_error {
    explicit insufficient_decay_error(const std::string& what) : std::runtime_error(what) {}
};

/// Shift/integration range does not fit inside the available sequence span.
struct span_exhausted_error : std::runtime_error {
    explicit span_exhausted_error(const std::string& what) : std::runtime_error(what) {}
};

/// Quadrature self-check failed to reach the requested tolerance.
struct quadrature_error : std::runtime_error {
    explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sinelat
