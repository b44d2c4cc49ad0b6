"""Exception hierarchy shared by every module of the package."""


class BogoliubovError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(BogoliubovError, ValueError):
    pass


class NotHermitian(BogoliubovError, ValueError):
    pass


class NotSymmetric(BogoliubovError, ValueError):
    pass


class NotSymmetricPairing(NotSymmetric):
    pass


class NotPSD(BogoliubovError, ValueError):
    pass


class Singular(BogoliubovError, ValueError):
    pass


class NonSquareTrace(BogoliubovError, ValueError):
    pass


class NotPositive(BogoliubovError, ValueError):
    pass


class GapViolation(BogoliubovError, ValueError):
    """The pairing is too strong: ||G|| >= 1."""


class OddKernel(BogoliubovError, ValueError):
    pass


class NotAntisymmetric(BogoliubovError, ValueError):
    pass


class SizeOverflow(BogoliubovError, ValueError):
    pass


class NotNormalized(BogoliubovError, ValueError):
    pass


class TruncationUnreliable(BogoliubovError, RuntimeError):
    """Too much ground-state weight sits near the Fock cutoff."""


class InvalidParams(BogoliubovError, ValueError):
    pass


class SchemaError(BogoliubovError, ValueError):
    pass
