"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class,
so the CLI can map them onto exit codes without string matching.
"""

from __future__ import annotations


class SingSurfError(Exception):
    """Base class for all errors raised by this package."""


class ExprSyntaxError(SingSurfError):
    """Malformed expression source. Carries the character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos
        self.reason = message


class UnknownIdentifier(SingSurfError):
    """Expression references a name that is not a variable, constant or function."""

    def __init__(self, name: str, pos: int):
        super().__init__(f"unknown identifier '{name}' (at position {pos})")
        self.name = name
        self.pos = pos


class DomainError(SingSurfError):
    """Evaluation hit a point outside a function's real domain (log of a
    non-positive number, division by zero, 0^negative, ...)."""

    def __init__(self, operation: str, value):
        super().__init__(f"domain error in '{operation}' at argument {value!r}")
        self.operation = operation
        self.value = value


class ValidationError(SingSurfError):
    """One or more structural invariants of the input are violated.

    ``violations`` is a list of (path, message) pairs, where path locates the
    offending field ("patches[1].metric.E", "seams[0].phi", ...).
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [("", violations)]
        self.violations = list(violations)
        lines = [f"{path}: {msg}" if path else msg for path, msg in self.violations]
        super().__init__("validation failed:\n  " + "\n  ".join(lines))


class LeftDomain(SingSurfError):
    """A geodesic exited the patch domain before reaching the requested length."""

    def __init__(self, at_length: float, point=None):
        msg = f"geodesic left the patch domain at arclength {at_length:.12g}"
        if point is not None:
            msg += f" near (u, v) = ({point[0]:.6g}, {point[1]:.6g})"
        super().__init__(msg)
        self.at_length = at_length
        self.point = point


class NoConnectingGeodesic(SingSurfError):
    """Shooting failed to find a geodesic joining two points."""


class ToleranceNotMet(SingSurfError):
    """Adaptive quadrature exhausted its budget. Carries the best estimate."""

    def __init__(self, estimate: float, error_bound: float):
        super().__init__(
            f"quadrature tolerance not met: estimate {estimate!r}, "
            f"error bound {error_bound!r}"
        )
        self.estimate = estimate
        self.error_bound = error_bound


class FitIllConditioned(SingSurfError):
    """A least-squares fit had a numerically singular design matrix."""


class OutOfValidatedRange(SingSurfError):
    """Special-function argument outside the range the implementation is
    validated for."""


class InsufficientRange(SingSurfError):
    """Spectral run does not reach far enough for the requested analysis."""


class ConvergenceFailure(SingSurfError):
    """An iterative numerical method (eigensolver, root finder) failed."""
