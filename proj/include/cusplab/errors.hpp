#pragma once

#include <stdexcept>
#include <string>

namespace cusplab {

/// Base class for all errors raised by the library.
struct MapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
struct DomainError : MapError {
    using MapError::MapError;
};

/// Evaluation requested exactly at an interval boundary where only limits exist.
struct BoundaryError : MapError {
    using MapError::MapError;
};

/// Point falls in a gap between branches (maps are defined on open intervals).
struct UndefinedPointError : MapError {
    using MapError::MapError;
};

/// Requested preimage does not exist on the indexed branch.
struct NoPreimageError : MapError {
    using MapError::MapError;
};

/// A forward orbit hit a gap, a zero-derivative point, or left the ambient interval.
struct OrbitBreakError : MapError {
    long break_index;
    OrbitBreakError(const std::string& what, long index)
        : MapError(what), break_index(index) {}
};

/// A backward orbit found no admissible preimage.
struct DeadEndError : MapError {
    long step_index;
    DeadEndError(const std::string& what, long index)
        : MapError(what), step_index(index) {}
};

/// Geometric misconfiguration (annulus crossing a branch boundary, etc).
struct GeometryError : MapError {
    using MapError::MapError;
};

/// A stated precondition of the operation does not hold (e.g. interval not
/// regularly returning).
struct PreconditionError : MapError {
    using MapError::MapError;
};

/// Numerical failure: non-convergence, degenerate fiber, underflowed radius.
struct NumericalError : MapError {
    using MapError::MapError;
};

} // namespace cusplab
