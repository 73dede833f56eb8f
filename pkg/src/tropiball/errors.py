"""Exception hierarchy.

Every domain error derives from :class:`TropicalError` so callers (and the
CLI) can catch one base class and map it to an exit code.
"""


class TropicalError(Exception):
    """Base class for all domain errors raised by tropiball."""


class InvalidPoint(TropicalError, ValueError):
    pass


class DimensionError(TropicalError, ValueError):
    pass


class DegenerateSimplex(TropicalError):
    """The vertex matrix has a singular tropical determinant."""


class NotASimplex(TropicalError, ValueError):
    pass


class NoTrunk(TropicalError):
    """No full-dimensional part: the (e-1)-trunk is empty."""


class TooFewVertices(TropicalError, ValueError):
    pass


class InvalidStart(TropicalError, ValueError):
    """Initial point of a Hit-and-Run chain is outside the polytope."""


class DegenerateBall(TropicalError, ValueError):
    pass


class InsufficientSamples(TropicalError):
    pass
