"""Exception types shared across the package."""


class SusyImmersionError(Exception):
    pass


class ParityError(SusyImmersionError):
    """An element or supermatrix does not have the parity an operation needs."""


class NonInvertible(SusyImmersionError):
    """Body of an element (or body matrix of a supermatrix) is singular."""


class CapacityError(SusyImmersionError):
    """The generator budget cannot supply the requested fresh generators."""


class GeneratorMismatch(SusyImmersionError):
    pass


class JetOrderError(SusyImmersionError):
    pass


class DegenerateNormal(SusyImmersionError):
    """The bracket of the tangent vectors has a self-product with zero body."""


class DegenerateMetric(SusyImmersionError):
    """The curvature denominator has zero body (curve-like metric)."""
