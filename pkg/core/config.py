"""
Shared configuration for the DG/SIAC study runner.

Process-wide settings come from DGSIAC_* environment variables (optionally
seeded from a .env file by main.py). They are read through get_settings() so
that values loaded after import are honored; call reload_settings() after
changing the environment.

Run configuration files use the same line-oriented key=value syntax as .env
files and are parsed with python-dotenv.
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional

from dotenv import dotenv_values

from core.utils import InvalidArgumentError

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Settings:
    """Settings resolved from the environment."""

    precision: str
    output_dir: str
    workers: int
    rk3_budget_seconds: float
    log_level: str
    file_logging: bool
    log_file: str

    @classmethod
    def from_env(cls) -> "Settings":
        try:
            workers = int(os.getenv("DGSIAC_WORKERS", "1"))
            budget = float(os.getenv("DGSIAC_RK3_BUDGET_SECONDS", "120"))
        except ValueError as e:
            raise InvalidArgumentError(f"Invalid numeric DGSIAC_* setting: {e}")
        if workers < 1:
            raise InvalidArgumentError(f"DGSIAC_WORKERS must be >= 1, got {workers}")
        return cls(
            precision=os.getenv("DGSIAC_PRECISION", "standard"),
            output_dir=os.getenv("DGSIAC_OUTPUT_DIR", "results"),
            workers=workers,
            rk3_budget_seconds=budget,
            log_level=os.getenv("DGSIAC_LOG_LEVEL", "INFO").upper(),
            file_logging=_env_bool("DGSIAC_FILE_LOGGING", "true"),
            log_file=os.getenv("DGSIAC_LOG_FILE", str(PROJECT_ROOT / "dg_siac_debug.log")),
        )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Return the cached settings, reading the environment on first use."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reload_settings() -> Settings:
    """Re-read the environment (e.g. after load_dotenv)."""
    global _settings
    _settings = Settings.from_env()
    return _settings


def load_run_file(path: str) -> Dict[str, str]:
    """
    Parse a key=value run configuration file.

    Args:
        path: File to read. Blank lines and '#' comments are ignored.

    Returns:
        Mapping of lower-cased keys to raw string values.
    """
    config_path = Path(path)
    if not config_path.is_file():
        raise InvalidArgumentError(f"Run configuration file not found: {config_path}")
    raw = dotenv_values(config_path)
    values = {key.strip().lower(): (value or "").strip() for key, value in raw.items()}
    logger.info(f"Loaded run configuration from {config_path} ({len(values)} keys)")
    return values
