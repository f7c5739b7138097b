"""Exception types shared across the simulator."""


class SqkdSimError(Exception):
    """Base class for all simulator errors."""


class DimensionMismatchError(SqkdSimError, ValueError):
    """Operands have incompatible Hilbert-space dimensions."""


class NormalizationError(SqkdSimError, ValueError):
    """Amplitude vector is not normalized within tolerance."""


class ConfigError(SqkdSimError, ValueError):
    """Run configuration is invalid or inconsistent."""


class InconsistentDisclosureError(SqkdSimError, ValueError):
    """Public disclosure does not match the transcript it claims to describe."""


class IncompleteTranscriptError(SqkdSimError, ValueError):
    """Transcript is missing rounds or has non-contiguous round ids."""


class UnsupportedStrategyError(SqkdSimError, ValueError):
    """Channel stack contains kinds the exact-enumeration oracle cannot handle."""


class KeyExhaustedError(SqkdSimError, RuntimeError):
    """Not enough unused key symbols remain for the requested operation."""


class KeyReuseError(SqkdSimError, RuntimeError):
    """A one-time-pad key symbol was offered for use a second time."""


class AbortedSessionError(SqkdSimError, RuntimeError):
    """The session aborted on the eavesdropping check; no keys may be used."""


class ProtocolViolationError(SqkdSimError, RuntimeError):
    """A participant or message violated the protocol contract."""


class WireFormatError(SqkdSimError, ValueError):
    """A wire line failed to parse."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class TransportError(SqkdSimError, RuntimeError):
    """Socket session failed or ended before completion."""
