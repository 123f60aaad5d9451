#pragma once

#include <stdexcept>
#include <string>

namespace stburg {

// Base class for every failure this library raises on purpose.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Zero pivot / structurally empty row met during sparse factorization.
struct SingularMatrixError : SolverError {
    SingularMatrixError(const std::string& what, long pivot) : SolverError(what), pivot_index(pivot) {}
    long pivot_index;  // row/column reached when factorization gave up, -1 if unknown
};

// The dual-to-primal denominator fell under the guard threshold.
struct DegenerateMapError : SolverError {
    using SolverError::SolverError;
};

// Newton ran out of iterations without meeting the residual tolerance.
struct NewtonDivergedError : SolverError {
    using SolverError::SolverError;
};

}  // namespace stburg
