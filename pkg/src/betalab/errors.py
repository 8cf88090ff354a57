"""Exception types shared across the package.

Everything numerical raises a subclass of BetaLabError so the CLI can map
module failures onto a single exit code.
"""


class BetaLabError(Exception):
    """Base class for all betalab errors."""


class UsageError(BetaLabError):
    """Bad arguments or configuration (caller error, not a numerical one)."""


class DegenerateImmersion(BetaLabError):
    """The induced metric is singular at the requested point."""


class LagrangianPoint(BetaLabError):
    """cos(alpha) vanished where a positive Kahler cosine is required."""


class ComplexPoint(BetaLabError):
    """sin(alpha) vanished where the adapted normal rotation is required."""


class NotCritical(BetaLabError):
    """A second-variation formula was requested on a non-critical surface."""


class NoSolution(BetaLabError):
    """The slope equation has no root (beta = 0 inside the catenoid neck)."""


class InvalidBeta(BetaLabError):
    """The requested beta is outside the validity range of the operation."""


class GridTooCoarse(BetaLabError):
    """Too few grid nodes for the requested finite-difference stencil."""


class AsymptoticMismatch(BetaLabError):
    """Solved slopes disagree with the truncated expansion beyond tolerance."""


class BoundViolation(BetaLabError):
    """A proved pointwise bound on the slope family failed numerically."""


class EllipticityViolation(BetaLabError):
    """The symbol determinant dipped below the negativity tolerance."""
