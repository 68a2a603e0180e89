"""Exception types raised across the package."""


class HRNGError(Exception):
    pass


# crypto
class EmptyAggregation(HRNGError):
    pass


class InvalidThreshold(HRNGError):
    pass


class FieldTooSmall(HRNGError):
    pass


class InsufficientShares(HRNGError):
    pass


class DuplicateShareIndex(HRNGError):
    pass


class InsufficientEntropyLength(HRNGError):
    pass


class OutputTooWide(HRNGError):
    pass


class InvalidElement(HRNGError):
    pass


# pool
class DuplicateEntry(HRNGError):
    pass


class PhaseViolation(HRNGError):
    pass


class AccessDenied(HRNGError):
    pass


# protocol
class InvalidConfig(HRNGError):
    pass


class RoundFailed(HRNGError):
    pass


class InsufficientPool(HRNGError):
    pass


# gas
class InvalidArity(HRNGError):
    pass


class Rejected(HRNGError):
    """A verification check failed.

    ``reason`` is a stable machine-readable tag (``"BadOpening"``,
    ``"GatewayDiversity"``, ...); ``detail`` optionally names the culprit.
    """

    def __init__(self, reason: str, detail: str | None = None):
        self.reason = reason
        self.detail = detail
        super().__init__(reason if detail is None else f"{reason}({detail})")


class ConfigError(HRNGError):
    """Config file unreadable or malformed (carries the parse location when known)."""
