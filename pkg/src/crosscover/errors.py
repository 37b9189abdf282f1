"""Exception hierarchy."""


class CrossCoverError(Exception):
    """Base class for all errors raised by :mod:`crosscover`."""


class ZeroVector(CrossCoverError, ValueError):
    pass


class BadDimension(CrossCoverError, ValueError):
    pass


class NotGeneralPosition(CrossCoverError, ValueError):
    """The representatives do not span R^d."""


class NumericalDegeneracy(CrossCoverError, ArithmeticError):
    """A quantity that is positive in exact arithmetic came out non-positive."""


class DegenerateCone(CrossCoverError, ValueError):
    pass


class WitnessNotFound(CrossCoverError):
    pass


class NonFiniteEverywhere(CrossCoverError):
    """The potential is +inf at every start point."""


class CertificateFailed(CrossCoverError):
    """The numerical g'' >= 0 / g'' convex certificate did not pass."""


class PointFileError(CrossCoverError, ValueError):
    pass
