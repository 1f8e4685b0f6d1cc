"""Shared pytest fixtures for kneser-cycles tests."""

from typing import Dict, Tuple
from unittest.mock import MagicMock

import pytest

from kneser_cycles.bitcore import Vertex
from kneser_cycles.lemma_engine import LemmaBuilder, LemmaStructure, build_k1
from kneser_cycles.middle_levels import MiddleLevelsCycle
from kneser_cycles.pipeline.base import PipelineContext
from kneser_cycles.pipeline.config import (
    BaseCaseConfig,
    ConstructConfig,
    LemmaConfig,
    PipelineConfig,
    VerifyConfig,
)
from kneser_cycles.providers import BaseCaseProvider, SearchBaseProvider
from kneser_cycles.store import BaseCertificateStore


@pytest.fixture(scope="session")
def search_provider() -> SearchBaseProvider:
    """Search provider shared by the whole session, so each k is searched once."""
    return SearchBaseProvider(budget=60.0)


@pytest.fixture
def builder(search_provider) -> LemmaBuilder:
    """Lemma builder backed by the shared search provider."""
    return LemmaBuilder(search_provider)


@pytest.fixture(scope="session")
def hexagon() -> MiddleLevelsCycle:
    """The only Hamilton cycle of Q(3,1), in the orientation solve_base returns."""
    order = tuple(Vertex.from_string(t) for t in ("001", "011", "010", "110", "100", "101"))
    return MiddleLevelsCycle(1, order)


@pytest.fixture(scope="session")
def structure_4_1() -> LemmaStructure:
    """Cell (4,1), used by many hand-checked examples."""
    return build_k1(4)


@pytest.fixture(scope="session")
def mid_k2(search_provider) -> MiddleLevelsCycle:
    """Searched Hamilton cycle of Q(5,2)."""
    return search_provider.middle_levels_cycle(2)


@pytest.fixture(scope="session")
def grid(search_provider) -> Dict[Tuple[int, int], LemmaStructure]:
    """Every cell with n <= 12 and k <= 3."""
    cells = {}
    for n, row in LemmaBuilder(search_provider).iter_rows(12, 3):
        for k, cell in row.items():
            cells[(n, k)] = cell
    return cells


@pytest.fixture
def mock_provider(hexagon) -> MagicMock:
    """Provider mock that only knows k = 1."""
    provider = MagicMock(spec=BaseCaseProvider)
    provider.middle_levels_cycle.return_value = hexagon
    provider.describe.return_value = "mock"
    return provider


@pytest.fixture
def base_dir(tmp_path, monkeypatch):
    """Empty base certificate directory installed as KNESER_BASE_DIR."""
    directory = tmp_path / "base-certs"
    monkeypatch.setenv("KNESER_BASE_DIR", str(directory))
    return directory


@pytest.fixture
def base_store(base_dir) -> BaseCertificateStore:
    """Store over the temporary base directory."""
    return BaseCertificateStore(base_dir)


@pytest.fixture
def pipeline_config(base_dir) -> PipelineConfig:
    """Pipeline configuration that searches base cases and reads nothing from disk."""
    return PipelineConfig(
        base_case=BaseCaseConfig(provider="search", search_budget=60.0, base_dir=str(base_dir)),
        lemma=LemmaConfig(verify_each_build=True),
        construct=ConstructConfig(format="bits", max_n=64),
        verify=VerifyConfig(max_violations=100),
    )


@pytest.fixture
def pipeline_context(pipeline_config) -> PipelineContext:
    """Fresh pipeline context."""
    return PipelineContext.create(config=pipeline_config)
