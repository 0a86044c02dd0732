"""Exception hierarchy shared by all modules."""


class JostLabError(Exception):
    """Base class for every error raised by the library."""


class ParseError(JostLabError, ValueError):
    """Malformed input document."""


class DomainError(JostLabError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class BoundaryZeroError(JostLabError):
    """A zero of the function lies on (or numerically too close to) a contour.

    Perturb the rectangle or contour and try again.
    """


class ConsistencyError(JostLabError):
    """Internal cross-check failed (e.g. winding counts do not add up)."""


class ResolutionError(JostLabError, ValueError):
    """Sampling grid too coarse for the requested band limit."""


class DivergenceError(JostLabError):
    """An improper integral does not appear to converge."""


class InfeasibleError(JostLabError):
    """A constructive search found no admissible choice."""


class DegenerateError(JostLabError):
    """Numerically degenerate configuration (double node, triple circle point)."""


class PreconditionError(JostLabError, ValueError):
    """Inputs violate a documented precondition."""
