"""Exception types shared across the package."""


class TotientLabError(Exception):
    """Base class for all package errors."""


class DomainError(TotientLabError):
    """An argument is outside the mathematical domain of the operation."""


class DimensionMismatch(TotientLabError):
    """A vector's length does not match the expected dimension."""


class UnsupportedFunction(TotientLabError):
    """The requested multiplicative function id is not registered."""


class BudgetExceeded(TotientLabError):
    """A computation would exceed the configured memory or size budget."""


class CorruptSnapshot(TotientLabError):
    """A snapshot file failed checksum or structural validation."""


class VersionMismatch(TotientLabError):
    """A snapshot file was written by an incompatible format version."""


class CertificationFailed(TotientLabError):
    """A primality certificate could not be constructed."""


class PreconditionFailed(TotientLabError):
    """An operation's precondition does not hold for the given input."""


class VerificationMismatch(TotientLabError):
    """A constructed object failed its independent re-verification."""


class FrontierExhausted(TotientLabError):
    """A search ran out of candidates before reaching its target."""


class NotFoundError(TotientLabError):
    """A bounded search ended without finding the requested object."""
