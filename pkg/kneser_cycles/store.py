"""Directory of installed middle-levels base certificates."""

import logging
import re
from pathlib import Path
from typing import List, Optional, Union

from .config import base_dir
from .exceptions import BaseCaseUnavailableError
from .middle_levels import MiddleLevelsCycle, export_certificate, import_certificate

_FILE_PATTERN = re.compile(r"^mid-(\d+)\.cert$")


class BaseCertificateStore:
    """Reads and writes ``mid-<k>.cert`` files in one directory."""

    def __init__(self, directory: Optional[Union[str, Path]] = None):
        """Initialize the store.

        Args:
            directory: Certificate directory. Defaults to KNESER_BASE_DIR
                (or ``./base-certs``), resolved when the store is created.
        """
        self.directory = Path(directory) if directory is not None else base_dir()

    def path_for(self, k: int) -> Path:
        return self.directory / f"mid-{k}.cert"

    def exists(self, k: int) -> bool:
        return self.path_for(k).is_file()

    def load(self, k: int) -> MiddleLevelsCycle:
        """Import and validate the installed certificate for ``k``."""
        path = self.path_for(k)
        if not path.is_file():
            raise BaseCaseUnavailableError(k, f"{path} not found")
        with open(path, encoding="utf-8") as f:
            cycle = import_certificate(f)
        if cycle.k != k:
            raise BaseCaseUnavailableError(k, f"{path} holds a certificate for k={cycle.k}")
        logging.info(f"Loaded base certificate for k={k} from {path}")
        return cycle

    def install(self, cycle: MiddleLevelsCycle) -> Path:
        """Write ``cycle`` as the certificate for its k, replacing any existing file."""
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(cycle.k)
        tmp = path.with_suffix(".cert.tmp")
        tmp.write_text(export_certificate(cycle))
        tmp.replace(path)
        logging.info(f"Installed base certificate for k={cycle.k} at {path}")
        return path

    def list_installed(self) -> List[int]:
        """Installed k values, ascending."""
        if not self.directory.is_dir():
            return []
        found = []
        for entry in self.directory.iterdir():
            match = _FILE_PATTERN.match(entry.name)
            if match and entry.is_file():
                found.append(int(match.group(1)))
        return sorted(found)
