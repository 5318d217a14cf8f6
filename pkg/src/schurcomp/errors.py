"""Exception types raised across the package."""


class SchurCompError(Exception):
    """Base class for all errors raised by schurcomp."""


class NotSquare(SchurCompError, ValueError):
    pass


class NotHermitian(SchurCompError, ValueError):
    pass


class DimensionMismatch(SchurCompError, ValueError):
    pass


class MatrixFormatError(SchurCompError, ValueError):
    """A matrix JSON document is malformed."""


class BadKappa(SchurCompError, ValueError):
    pass


class InfeasibleInput(SchurCompError):
    """The completion problem has no solution for the requested budget."""


class ScheduleInvalid(SchurCompError, ValueError):
    pass


class NonpositiveLambda(SchurCompError, ValueError):
    pass


class CertificateMismatch(SchurCompError, ValueError):
    pass


class JordanDegenerate(SchurCompError):
    """Eigenvectors were requested at a parameter where the pair collides."""


class NotDegenerate(SchurCompError):
    """A Jordan chain was requested at a parameter where no pair collides."""


class GridOutOfRange(SchurCompError, ValueError):
    pass


class BlockInconsistent(SchurCompError, ValueError):
    pass


class ANotPositiveDefinite(SchurCompError, ValueError):
    pass


class NotJFrame(SchurCompError):
    pass


class ContractionSingular(SchurCompError):
    """``I - K K*`` is too close to singular to take its inverse square root."""


class NoConvergence(SchurCompError):
    pass


class CardinalityMismatch(SchurCompError, ValueError):
    pass


class SingularA(SchurCompError, ValueError):
    pass
