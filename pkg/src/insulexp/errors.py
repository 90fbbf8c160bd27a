"""Exception hierarchy.

Two families matter to callers: `InputError` (bad arguments or files,
CLI exit code 2) and `NumericalError` (a solver missed its target,
CLI exit code 3).
"""


class InsulexpError(Exception):
    """Base class for all package errors."""


class InputError(InsulexpError):
    """Invalid input: bad dimensions, signs, ranges, or file contents."""


class NumericalError(InsulexpError):
    """A numerical stage failed to meet its accuracy or convergence target."""


# ---- input validation ----

class NonPositiveEntry(InputError):
    """A curvature eigenvalue (or other required-positive entry) is <= 0."""


class DimensionMismatch(InputError):
    """Length of a diagonal does not match the stated ambient dimension."""


class NegativeLambda(InputError):
    """The exponent map is only defined for lambda >= 0."""


class DegenerateWeight(InputError):
    """A weight coefficient leaves its admissible range (loses positivity)."""


class WrongDimension(InputError):
    """Operation called with an ambient dimension it does not support."""


class UnsupportedDimension(InputError):
    """No solver is available for this ambient dimension."""


class SizeMismatch(InputError):
    """Coefficient vector does not conform to the basis size."""


class EmptyRange(InputError):
    """An index range selects no grid cells."""


class NotPositiveDefinite(InputError):
    """Matrix argument must be symmetric positive definite."""


class EllipticityViolation(InputError):
    """Coefficient field violates its stated ellipticity bounds."""


# ---- numerical failures ----

class ConvergenceFailure(NumericalError):
    """Eigenvalue refinement did not reach its relative tolerance."""


class NotConverged(NumericalError):
    """Spectral convergence check failed between two resolutions."""


class QuadratureFailure(NumericalError):
    """A quadrature denominator or consistency check degenerated."""


class SingularResolvent(NumericalError):
    """Deflated resolvent system is numerically singular (tiny spectral gap)."""


class SolverDiverged(NumericalError):
    """Linear solve missed the residual target."""


class InsufficientRings(NumericalError):
    """Too few usable dyadic rings to fit a decay exponent."""


class NoConvergence(NumericalError):
    """Fixed-point iteration exhausted its budget."""
