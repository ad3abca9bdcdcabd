"""Exception hierarchy shared by every module."""


class SwkbLabError(Exception):
    """Base class for all errors raised by swkblab."""


class ParamError(SwkbLabError, ValueError):
    """A physical or numerical parameter violates its validity constraint."""


class DomainError(SwkbLabError, ValueError):
    """A position lies outside the domain of the superpotential."""


class NoRootError(SwkbLabError):
    """Bracket expansion failed to enclose a turning point."""


class MultipleRegionError(SwkbLabError):
    """More than one classically allowed interval was detected."""


class QuadratureDivergence(SwkbLabError):
    """Refinement did not reach the requested tolerance within its level budget."""


class NegativityError(SwkbLabError):
    """E - W^2 went negative inside the integration interval beyond roundoff."""


class NoConvergence(SwkbLabError):
    """Eigenvalue bisection failed to converge."""


class BoxTooSmall(SwkbLabError):
    """The eigenfunction does not decay inside the integration box."""


class ShiftMismatch(SwkbLabError):
    """The shift-rule energy ladder disagrees with the closed-form spectrum."""
