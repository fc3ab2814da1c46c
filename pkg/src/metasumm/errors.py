"""Exception hierarchy shared by all metasumm modules.

The CLI maps these onto exit codes: configuration and data problems exit
with 2, transport-level failures with 3.
"""


class MetasummError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MetasummError):
    """Invalid or inconsistent configuration (unknown lemmatizer, bad fractions, ...)."""


class DataError(MetasummError):
    """Malformed or inconsistent input data (corpus schema, duplicate ids, empty input)."""


class TransportError(MetasummError):
    """The remote abstractive/encoder service could not be reached."""


class ServiceError(MetasummError):
    """The remote service answered with a non-2xx status."""

    def __init__(self, status: int, body: str):
        super().__init__(f"service returned HTTP {status}: {body[:200]}")
        self.status = status
        self.body = body


class ProtocolError(MetasummError):
    """The remote service answered 2xx but the payload violates the wire contract."""


class TrainingDivergedError(MetasummError):
    """Optimization produced a non-finite loss."""
