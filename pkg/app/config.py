"""Application configuration utilities.

This module loads and validates engine configuration from environment
variables. It exposes a :func:`get_settings` helper that returns a cached
instance of :class:`Settings` with typed access to the engine limits, the
character-table oracle options and logging.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Final

from dotenv import load_dotenv

load_dotenv()


class ConfigurationError(RuntimeError):
    """Raised when configuration values are missing or malformed."""


@dataclass(slots=True)
class EngineConfig:
    """Size limits and sampling options of the decomposition engine."""

    seed: int
    max_group_order: int
    max_field_order: int
    scaling_samples: int
    reciprocity_samples: int
    clifford_cross_check: bool
    comm_lemma_max_order: int


@dataclass(slots=True)
class OracleConfig:
    """Options of the character-table oracle."""

    prime_bound: int
    max_attempts: int


@dataclass(slots=True)
class LoggingConfig:
    """Logging related configuration settings."""

    level: str


@dataclass(slots=True)
class Settings:
    """Container for all application settings."""

    engine: EngineConfig
    oracle: OracleConfig
    logging: LoggingConfig


DEFAULT_SEED: Final[int] = 0
DEFAULT_MAX_GROUP_ORDER: Final[int] = 3**12
DEFAULT_MAX_FIELD_ORDER: Final[int] = 81
DEFAULT_SCALING_SAMPLES: Final[int] = 100
DEFAULT_RECIPROCITY_SAMPLES: Final[int] = 50
DEFAULT_COMM_LEMMA_MAX_ORDER: Final[int] = 3**6
DEFAULT_ORACLE_PRIME_BOUND: Final[int] = 10**6
DEFAULT_ORACLE_MAX_ATTEMPTS: Final[int] = 64
DEFAULT_LOG_LEVEL: Final[str] = "INFO"

_TRUE_VALUES: Final[frozenset[str]] = frozenset({"1", "true", "yes", "on"})
_FALSE_VALUES: Final[frozenset[str]] = frozenset({"0", "false", "no", "off"})


def _int_env(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as error:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from error
    if value < minimum:
        raise ConfigurationError(f"{name} must be at least {minimum}")
    return value


def _bool_env(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    lowered = raw.strip().lower()
    if lowered in _TRUE_VALUES:
        return True
    if lowered in _FALSE_VALUES:
        return False
    raise ConfigurationError(f"{name} must be a boolean flag, got {raw!r}")


def _load_engine_config() -> EngineConfig:
    return EngineConfig(
        seed=_int_env("ENGINE_SEED", DEFAULT_SEED),
        max_group_order=_int_env("MAX_GROUP_ORDER", DEFAULT_MAX_GROUP_ORDER, minimum=1),
        max_field_order=_int_env("MAX_FIELD_ORDER", DEFAULT_MAX_FIELD_ORDER, minimum=3),
        scaling_samples=_int_env("SCALING_SAMPLES", DEFAULT_SCALING_SAMPLES),
        reciprocity_samples=_int_env("RECIPROCITY_SAMPLES", DEFAULT_RECIPROCITY_SAMPLES),
        clifford_cross_check=_bool_env("CLIFFORD_CROSS_CHECK", True),
        comm_lemma_max_order=_int_env("COMM_LEMMA_MAX_ORDER", DEFAULT_COMM_LEMMA_MAX_ORDER, minimum=1),
    )


def _load_oracle_config() -> OracleConfig:
    return OracleConfig(
        prime_bound=_int_env("ORACLE_PRIME_BOUND", DEFAULT_ORACLE_PRIME_BOUND, minimum=3),
        max_attempts=_int_env("ORACLE_MAX_ATTEMPTS", DEFAULT_ORACLE_MAX_ATTEMPTS, minimum=1),
    )


def _load_logging_config() -> LoggingConfig:
    level = os.getenv("LOG_LEVEL", DEFAULT_LOG_LEVEL)
    return LoggingConfig(level=level)


@lru_cache
def get_settings() -> Settings:
    """Return cached application settings loaded from environment variables."""

    return Settings(
        engine=_load_engine_config(),
        oracle=_load_oracle_config(),
        logging=_load_logging_config(),
    )


__all__ = [
    "ConfigurationError",
    "EngineConfig",
    "LoggingConfig",
    "OracleConfig",
    "Settings",
    "get_settings",
]
