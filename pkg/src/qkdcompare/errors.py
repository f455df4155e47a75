"""Exception types raised by the key-rate calculations."""


class KeyRateError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KeyRateError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class DegenerateChannelError(KeyRateError):
    """The channel transmits nothing and injects nothing, so conditional
    statistics are undefined (eta = 0 with zero thermal occupation)."""


class UnphysicalStateError(KeyRateError):
    """A requested state does not exist, e.g. a QBER triple with a negative
    Bell-diagonal weight or a covariance matrix violating the uncertainty
    relation."""


class NormalizationUnavailableError(KeyRateError):
    """Rate normalization was requested where no finite positive upper
    capacity bound exists (entanglement-breaking channel, or a bound
    that is not positive)."""


class UndefinedComparisonError(KeyRateError):
    """A relative comparison of two rates is undefined because both are zero."""


class MonotonicityError(KeyRateError):
    """A root bracket assumed monotone turned out not to be."""


class TruncationError(KeyRateError):
    """A Fock-space cutoff leaves too much thermal tail mass to be trusted."""


class QuadratureError(KeyRateError):
    """A numerical quadrature failed its self-check (mass or domain guard)."""


class ConfigError(KeyRateError):
    """A configuration document is malformed, has unknown keys, or asks for
    an unsupported combination of options."""
