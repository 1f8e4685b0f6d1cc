"""Base-case providers: where middle-levels cycles come from.

The construction asks a provider for a Hamilton cycle of Q(2k+1,k) and does
not care whether it was searched or read from an installed certificate.
"""

import logging
import threading
from abc import ABC, abstractmethod
from typing import Dict, Optional

from .config import SEARCH_BUDGET
from .exceptions import (
    BaseCaseUnavailableError,
    BudgetExhaustedError,
    CertificateParseError,
    CertificateValidationError,
)
from .middle_levels import MiddleLevelsCycle, solve_base
from .store import BaseCertificateStore

logger = logging.getLogger(__name__)


class BaseCaseProvider(ABC):
    """Supplies middle-levels cycles; implementations must be safe for concurrent reads."""

    @abstractmethod
    def middle_levels_cycle(self, k: int) -> MiddleLevelsCycle:
        """A valid Hamilton cycle of Q(2k+1,k).

        Raises:
            BaseCaseUnavailableError: if no cycle can be supplied for ``k``.
        """

    def describe(self) -> str:
        return self.__class__.__name__


class SearchBaseProvider(BaseCaseProvider):
    """Runs :func:`solve_base`, caching one cycle per k."""

    def __init__(self, budget: float = SEARCH_BUDGET):
        self.budget = budget
        self._cache: Dict[int, MiddleLevelsCycle] = {}
        self._lock = threading.Lock()

    def middle_levels_cycle(self, k: int) -> MiddleLevelsCycle:
        with self._lock:
            if k in self._cache:
                return self._cache[k]
            logger.info(f"Searching middle levels cycle for k={k} (budget {self.budget:g}s)")
            try:
                cycle = solve_base(k, self.budget)
            except BudgetExhaustedError as e:
                raise BaseCaseUnavailableError(
                    k, f"{e}; install a certificate with 'base import'"
                ) from e
            self._cache[k] = cycle
            return cycle

    def describe(self) -> str:
        return f"search (budget {self.budget:g}s)"


class DirectoryBaseProvider(BaseCaseProvider):
    """Reads installed ``mid-<k>.cert`` files."""

    def __init__(self, store: Optional[BaseCertificateStore] = None):
        self.store = store or BaseCertificateStore()

    def middle_levels_cycle(self, k: int) -> MiddleLevelsCycle:
        try:
            return self.store.load(k)
        except (CertificateParseError, CertificateValidationError) as e:
            raise BaseCaseUnavailableError(
                k, f"invalid certificate {self.store.path_for(k)}: {e}"
            ) from e

    def describe(self) -> str:
        return f"file ({self.store.directory})"


class FallbackBaseProvider(BaseCaseProvider):
    """Tries ``primary`` first and falls back to ``secondary`` when it cannot supply k."""

    def __init__(self, primary: BaseCaseProvider, secondary: BaseCaseProvider):
        self.primary = primary
        self.secondary = secondary

    def middle_levels_cycle(self, k: int) -> MiddleLevelsCycle:
        try:
            return self.primary.middle_levels_cycle(k)
        except BaseCaseUnavailableError as e:
            logger.warning(
                f"{self.primary.describe()} provider failed for k={k} ({e}), "
                f"falling back to {self.secondary.describe()}"
            )
            return self.secondary.middle_levels_cycle(k)

    def describe(self) -> str:
        return f"{self.primary.describe()} then {self.secondary.describe()}"
