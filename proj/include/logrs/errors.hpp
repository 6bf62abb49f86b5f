#pragma once

#include <stdexcept>
#include <string>

namespace logrs {

/// Base class for every failure the library reports. Subclasses mirror the
/// failure modes callers are expected to branch on; all carry a message
/// naming the offending quantity.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Root finding requested on a constant polynomial.
struct DegreeZeroError : Error {
    using Error::Error;
};

/// Root residuals still above tolerance after the iteration budget.
struct IllConditionedError : Error {
    using Error::Error;
};

/// Adaptive quadrature could not meet tolerance within the panel budget.
struct QuadratureFailure : Error {
    using Error::Error;
};

/// Intermediate coefficients left the double range during expansion.
struct OverflowGuard : Error {
    using Error::Error;
};

/// Rejection sampling of a generic base value exhausted its draw budget.
struct NoGenericPoint : Error {
    using Error::Error;
};

/// Path continuation step shrank below the floor without a termination test
/// firing; usually the base point sits too close to a degenerate line.
struct StepCollapse : Error {
    using Error::Error;
};

/// A ray lift could neither terminate nor be certified clear within budget.
struct BudgetExceeded : Error {
    using Error::Error;
};

/// The base value is collinear with two critical values.
struct GenericityViolation : Error {
    using Error::Error;
};

/// Chain following around a ramification point contradicted the side labels.
struct InconsistentSides : Error {
    using Error::Error;
};

/// A skeleton ball is too small for the requested truncation.
struct RadiusTooSmall : Error {
    using Error::Error;
};

/// A surface point falls outside the meshed window.
struct OutOfWindow : Error {
    using Error::Error;
};

/// The asymptotic-value tail bound stayed above tolerance; the integration
/// radius must grow.
struct TailNotConverged : Error {
    using Error::Error;
};

/// Finite-difference Jacobian lost rank during fitting.
struct SingularJacobian : Error {
    using Error::Error;
};

}  // namespace logrs
