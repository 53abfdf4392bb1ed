"""Exception hierarchy shared across the package."""


class FasError(Exception):
    """Base class for every error raised by this package."""


class LengthMismatch(FasError, ValueError):
    pass


class ParamError(FasError, ValueError):
    pass


class DecodeError(FasError, ValueError):
    """Malformed or non-canonical encoding."""


class DlogOutOfRange(FasError):
    """No exponent in [0, B] maps to the target.

    Raised by bounded discrete log; at the protocol level it means the inner
    product exceeds the bound or the key does not match the ciphertext.
    """


class InvalidStatement(FasError, ValueError):
    pass


class PreSigInvalid(FasError):
    pass


class WitnessMismatch(FasError, ValueError):
    pass


class RelationUnsatisfied(FasError):
    pass


class ModeError(FasError):
    pass


class AuxInvalid(FasError):
    pass


class ExtractFailed(FasError):
    pass


class BoundExceeded(FasError):
    """Seller-side refusal: the requested inner product falls outside [0, B]."""


class EnvelopeError(FasError, ValueError):
    """Wrong magic, version, mode or layout in a serialized message."""
