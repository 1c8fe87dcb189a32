"""Exception types shared across the package."""

from __future__ import annotations


class ModelValidationError(ValueError):
    """A model or measure specification violates its invariants."""


class DomainError(ValueError):
    """An argument lies outside the documented domain of an operation."""


class CapabilityError(RuntimeError):
    """The requested operation is not available for this family.

    Raised e.g. when exact sampling is requested for a family that has no
    exact marginal sampler; the integral criteria remain available.
    """


class EvaluationError(ArithmeticError):
    """An integrand or model function returned a non-finite value.

    Carries the offending abscissa in ``args[1]`` when known.
    """

    def __init__(self, message: str, abscissa: float | None = None):
        super().__init__(message, abscissa)
        self.abscissa = abscissa


class InternalConsistencyError(AssertionError):
    """Two independent evaluation routes disagreed beyond tolerance."""


class UndeterminedError(RuntimeError):
    """A numerical verdict needed by a downstream decision was Undetermined."""


class ConstructionFailedError(RuntimeError):
    """No admissible sequence was found within the probe-grid depth.

    ``diagnostics`` holds the partial selection state for inspection.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class GeometryInvariantError(AssertionError):
    """A convex-geometry invariant (slope order, sandwich bound) failed."""
