from __future__ import annotations


class DomainError(ValueError):
    """An element id outside the declared ground set was passed to an oracle."""


class PreconditionError(ValueError):
    """An operation was called in a state its contract does not allow."""


class SpecError(ValueError):
    """Malformed oracle spec, stream file or generator spec."""


class StreamValidationError(SpecError):
    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None else f"{message} (event {position})")
        self.position = position
