import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv
from typing_extensions import Self

from .exceptions import ConfigurationError

SEED_ENV = "RI_TAILS_SEED"
LOG_LEVEL_ENV = "RI_TAILS_LOG_LEVEL"
WORKERS_ENV = "RI_TAILS_WORKERS"

_LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


@dataclass(frozen=True)
class Settings:
    """Runtime settings read from the environment (and an optional .env file)."""

    seed_override: Optional[int] = None
    log_level: str = "WARNING"
    workers: int = 1

    @classmethod
    def from_env(cls, load_file: bool = True) -> Self:
        """Build settings from environment variables.

        Args:
            load_file: Whether to load a ``.env`` file first. Existing variables win.

        Returns:
            Settings instance

        Raises:
            ConfigurationError: If a variable is set to a malformed value
        """
        if load_file:
            load_dotenv(override=False)

        seed_override = None
        raw_seed = os.getenv(SEED_ENV)
        if raw_seed is not None and raw_seed.strip():
            try:
                seed_override = int(raw_seed.strip(), 0)
            except ValueError:
                raise ConfigurationError(f"{SEED_ENV} must be an unsigned integer, got {raw_seed!r}")
            if not 0 <= seed_override < 2 ** 64:
                raise ConfigurationError(f"{SEED_ENV} must fit in 64 unsigned bits, got {raw_seed!r}")

        log_level = os.getenv(LOG_LEVEL_ENV, "WARNING").strip().upper()
        if log_level not in _LOG_LEVELS:
            raise ConfigurationError(f"{LOG_LEVEL_ENV} must be one of {_LOG_LEVELS}, got {log_level!r}")

        raw_workers = os.getenv(WORKERS_ENV, "1").strip()
        try:
            workers = int(raw_workers)
        except ValueError:
            raise ConfigurationError(f"{WORKERS_ENV} must be a positive integer, got {raw_workers!r}")
        if workers < 1:
            raise ConfigurationError(f"{WORKERS_ENV} must be a positive integer, got {raw_workers!r}")

        return cls(seed_override=seed_override, log_level=log_level, workers=workers)
