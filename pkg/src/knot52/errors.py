"""Exception hierarchy.

Every failure raised by the library derives from :class:`Knot52Error`, so
callers (the CLI in particular) can separate mathematical failures from
programming errors with a single ``except``.
"""


class Knot52Error(Exception):
    pass


class NonPositiveParameter(Knot52Error, ValueError):
    """The representation parameter ``s`` must be strictly positive."""


class NonUnimodular(Knot52Error, ValueError):
    """A matrix expected to have determinant 1 does not, within tolerance."""


class DegenerateAlpha(Knot52Error, ValueError):
    """An SU(1,1) matrix has ``|alpha| < 1``; the input is corrupted."""


class DiskBoundaryOverflow(Knot52Error, ArithmeticError):
    """A covering-group coordinate reached the boundary of the unit disk."""


class SlopeOutOfRange(Knot52Error, ValueError):
    """The requested slope lies outside the open interval (0, 4)."""


class BracketNotFound(Knot52Error, RuntimeError):
    pass


class ToleranceNotReached(Knot52Error, RuntimeError):
    """Bisection exhausted floating-point resolution before meeting ``tol``."""


class GridTooSmall(Knot52Error, ValueError):
    pass
