"""Configuration module for kneser-cycles."""

import logging
import os
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def get_default_base_dir() -> Path:
    """Default directory holding installed middle-levels certificates."""
    return Path("./base-certs")


class PathConfig:
    """Base certificate directory and metrics file location.

    Each path comes from its KNESER_* environment variable, else the
    ``paths:`` section of the YAML file, else the default. Nothing is
    created here; the store makes its directory on first install.
    """

    def __init__(self, config_file: Optional[str] = None):
        """Resolve both paths.

        Args:
            config_file: YAML file with a ``paths:`` section; ignored if absent.
        """
        yaml_paths: dict = {}
        if config_file and Path(config_file).exists():
            with open(config_file) as f:
                data = yaml.safe_load(f) or {}
                yaml_paths = data.get("paths", {})

        self.base_dir = self._resolve_path(
            os.getenv("KNESER_BASE_DIR"),
            yaml_paths.get("base_dir"),
            get_default_base_dir(),
        )

        self.metrics_file = self._resolve_path(
            os.getenv("KNESER_METRICS_FILE"),
            yaml_paths.get("metrics_file"),
            Path("./kneser-metrics.json"),
        )

    @staticmethod
    def _resolve_path(env_value: Optional[str], yaml_value: Optional[str], default: Path) -> Path:
        """First of environment, YAML and default that is set, made absolute."""
        return Path(env_value or yaml_value or default).resolve()

    def to_dict(self) -> dict:
        """Export configuration as dictionary of strings."""
        return {
            "base_dir": str(self.base_dir),
            "metrics_file": str(self.metrics_file),
        }


def base_dir() -> Path:
    """Current base certificate directory (re-reads KNESER_BASE_DIR)."""
    return PathConfig(config_file=os.getenv("KNESER_CONFIG_FILE")).base_dir


# Search and size limits
SEARCH_BUDGET = float(os.getenv("KNESER_SEARCH_BUDGET", "60"))
MAX_N = int(os.getenv("KNESER_MAX_N", "64"))
MAX_VIOLATIONS = 100

# Setup logging
log_level = os.getenv("LOG_LEVEL", "INFO")
logging.basicConfig(
    level=getattr(logging, log_level.upper(), logging.INFO),
    format="%(asctime)s - %(levelname)s - [%(funcName)s] - %(message)s",
)
