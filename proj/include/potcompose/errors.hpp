#pragma once

#include <stdexcept>
#include <string>

namespace potcompose {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A potential parameter violates its family's admissibility range.
struct ParamOutOfRange : Error {
    using Error::Error;
};

/// An eigenstate or seed degree outside the admissible range.
struct IndexOutOfRange : Error {
    using Error::Error;
};

/// No integer degree lies inside the admissibility window.
struct EmptyRange : Error {
    using Error::Error;
};

/// A construction-time self check failed (Rayleigh constancy, nodelessness,
/// boundary behaviour, or energy cross-check).
struct ConstructionCheckFailed : Error {
    using Error::Error;
};

/// A sign change was found where a seed must be nodeless.
struct NodeDetected : Error {
    using Error::Error;
};

/// A tail-integral boundary condition failed numerically.
struct BoundaryCheckFailed : Error {
    using Error::Error;
};

/// The adaptive integrator exhausted its depth budget.
struct QuadratureFailure : Error {
    using Error::Error;
};

/// bisect_root called without a sign change on the bracket.
struct NoSignChange : Error {
    using Error::Error;
};

/// Wronskian over solutions that do not share one potential.
struct MixedOwners : Error {
    using Error::Error;
};

/// Mapping targets must have a finite lower endpoint.
struct TargetLowerInfinite : Error {
    using Error::Error;
};

/// Endpoint limits or monotonicity of the mapping failed numerically.
struct MappingCheckFailed : Error {
    using Error::Error;
};

/// Chain seed does not belong to the preceding stage's system.
struct SeedOwnerMismatch : Error {
    using Error::Error;
};

/// A Jacobi recurrence denominator vanished (internal; evaluation falls
/// back to the explicit series).
struct DegenerateRecurrence : Error {
    using Error::Error;
};

/// Config text could not be parsed; carries a 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_no)
        : Error(msg), line(line_no) {}
    int line;
};

/// Config parsed but a field violates a constraint.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace potcompose
