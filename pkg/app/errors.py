"""Exception hierarchy shared by the engine, the services and the command line."""

from __future__ import annotations

from typing import Any


class EngineError(Exception):
    """Base class for all errors raised by the engine."""


class DomainError(EngineError, ValueError):
    """Raised when an operation is called outside of its mathematical domain."""


class GuardrailError(DomainError):
    """Raised when a computation would exceed the configured size limits."""


class InputError(EngineError, ValueError):
    """Raised when an input document cannot be parsed or validated."""

    def __init__(self, message: str, *, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class InternalConsistencyError(EngineError, RuntimeError):
    """Raised when an identity that must hold by theory fails at runtime.

    The ``trace`` attribute carries whatever partial decomposition data was
    available when the failure was detected.
    """

    def __init__(self, message: str, *, trace: list[dict[str, Any]] | None = None) -> None:
        self.trace = trace or []
        super().__init__(message)


__all__ = [
    "DomainError",
    "EngineError",
    "GuardrailError",
    "InputError",
    "InternalConsistencyError",
]
