"""
Numerical settings for the distance toolkit
Defaults can be overridden by CQDIST_* environment variables or a .env file

VERSION HISTORY:
1.1.0 - Sweep worker count and compare tolerance - 18/10/26
      ADDITIONS:
      - CQDIST_SWEEP_WORKERS for parallel sweeps
      - CQDIST_COMPARE_TOL for the compare command
1.0.0 - Environment-driven settings with cached instance - 18/10/26
KEY FUNCTIONS:
- Settings.from_env() reads .env and CQDIST_* variables
- get_settings() returns the cached process-wide instance
- reset_settings() drops the cache (tests)
"""
import os
import logging
from dataclasses import dataclass
from typing import Callable, Optional, TypeVar

from dotenv import load_dotenv

from modules.errors import ConfigError

# Configure logging
logger = logging.getLogger(__name__)

T = TypeVar("T")

STRICTNESS_LEVELS = ("strict", "warn")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _read(name: str, default: T, cast: Callable[[str], T]) -> T:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise ConfigError(f"Invalid value for {name}: {raw!r}") from None


@dataclass(frozen=True)
class Settings:
    """Numerical defaults shared by every command"""

    abs_tol: float = 1e-9
    max_depth: int = 40
    min_depth: int = 4
    hermitian_tol: float = 1e-10
    purity_tol: float = 1e-9
    strictness: str = "strict"
    compare_tol: float = 1e-8
    sweep_workers: int = 3
    log_level: str = "WARNING"

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ConfigError("CQDIST_ABS_TOL must be positive")
        if self.max_depth < 1:
            raise ConfigError("CQDIST_MAX_DEPTH must be at least 1")
        if not 0 <= self.min_depth <= self.max_depth:
            raise ConfigError("CQDIST_MIN_DEPTH must lie in [0, CQDIST_MAX_DEPTH]")
        if self.hermitian_tol < 0 or self.purity_tol < 0 or not self.compare_tol > 0:
            raise ConfigError("Tolerances must be non-negative (compare tolerance positive)")
        if self.strictness not in STRICTNESS_LEVELS:
            raise ConfigError(f"CQDIST_STRICTNESS must be one of {STRICTNESS_LEVELS}")
        if self.sweep_workers < 1:
            raise ConfigError("CQDIST_SWEEP_WORKERS must be at least 1")
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(f"CQDIST_LOG_LEVEL must be one of {LOG_LEVELS}")

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "Settings":
        """
        Build settings from the environment

        Args:
            dotenv_path: Optional .env file; the default search is used when omitted

        Returns:
            Settings instance
        """
        load_dotenv(dotenv_path)
        return cls(
            abs_tol=_read("CQDIST_ABS_TOL", cls.abs_tol, float),
            max_depth=_read("CQDIST_MAX_DEPTH", cls.max_depth, int),
            min_depth=_read("CQDIST_MIN_DEPTH", cls.min_depth, int),
            hermitian_tol=_read("CQDIST_HERMITIAN_TOL", cls.hermitian_tol, float),
            purity_tol=_read("CQDIST_PURITY_TOL", cls.purity_tol, float),
            strictness=_read("CQDIST_STRICTNESS", cls.strictness, str.lower),
            compare_tol=_read("CQDIST_COMPARE_TOL", cls.compare_tol, float),
            sweep_workers=_read("CQDIST_SWEEP_WORKERS", cls.sweep_workers, int),
            log_level=_read("CQDIST_LOG_LEVEL", cls.log_level, str.upper),
        )


_instance: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the process-wide settings (singleton pattern)"""
    global _instance
    if _instance is None:
        _instance = Settings.from_env()
        logger.debug(f"Loaded settings: {_instance}")
    return _instance


def reset_settings():
    """Reset the cached settings (useful for testing)"""
    global _instance
    _instance = None
