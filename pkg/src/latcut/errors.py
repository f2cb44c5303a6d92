"""Exception hierarchy.

Solver alarms (``SolverAlarm`` subclasses) signal a violated precondition or a
numerical failure inside the cutting-plane loop; the CLI maps them to exit
code 2.
"""


class LatcutError(Exception):
    """Base class for every error raised by this package."""


# -- lattice ---------------------------------------------------------------

class LatticeError(LatcutError):
    pass


class RankDeficient(LatticeError):
    """The basis is dependent, or the norm is singular on its span."""


class RankTooLarge(LatticeError):
    """Exact enumeration was asked for a rank above its limit."""


class NotPrimitive(LatticeError):
    """Basis coefficients of the vector have a common factor."""


class ZeroVector(LatticeError):
    pass


# -- sampler ---------------------------------------------------------------

class SamplerError(LatcutError):
    pass


class ZeroNormal(SamplerError):
    pass


class InfeasibleStart(SamplerError):
    """No strictly interior starting point could be recovered."""


class DegenerateBody(SamplerError):
    """The body has collapsed numerically in some direction."""


class DimensionTooLarge(SamplerError):
    pass


class EmptySlice(SamplerError):
    """A slice of the polytope has no relative interior."""


# -- solver ----------------------------------------------------------------

class SolverAlarm(LatcutError):
    pass


class OracleBudgetExceeded(SolverAlarm):
    pass


class InfeasibleRegion(SolverAlarm):
    pass


class OracleContractViolation(SolverAlarm):
    pass


class HalfIntegerAmbiguity(SolverAlarm):
    pass


class NoIntegralPoint(SolverAlarm):
    """The final segment was exhausted without a certified point.

    ``visited`` holds every integral point queried during the search.
    """

    def __init__(self, message, visited=()):
        super().__init__(message)
        self.visited = list(visited)


# -- sfm -------------------------------------------------------------------

class SFMError(LatcutError):
    pass


class OutOfBox(SFMError):
    pass


class GroundSetTooLarge(SFMError):
    pass


class InstanceError(SFMError):
    """Malformed instance description."""
