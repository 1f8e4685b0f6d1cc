"""Factory functions for creating dependency-injected instances."""

import logging
from typing import Optional

from .exceptions import ParameterError
from .lemma_engine import LemmaBuilder
from .metrics import BuildMetrics
from .pipeline.config import BaseCaseConfig, LemmaConfig, PipelineConfig
from .pipeline.orchestrator import ConstructionPipeline
from .providers import (
    BaseCaseProvider,
    DirectoryBaseProvider,
    FallbackBaseProvider,
    SearchBaseProvider,
)
from .store import BaseCertificateStore


def create_store(config: Optional[BaseCaseConfig] = None) -> BaseCertificateStore:
    """Base certificate store for the configured directory.

    Args:
        config: Base case configuration; ``base_dir=None`` means KNESER_BASE_DIR.

    Returns:
        BaseCertificateStore instance.
    """
    config = config or BaseCaseConfig()
    return BaseCertificateStore(config.base_dir)


def create_base_provider(config: Optional[BaseCaseConfig] = None) -> BaseCaseProvider:
    """Create the base-case provider named by ``config.provider``.

    Args:
        config: Base case configuration ("auto", "search" or "file").

    Returns:
        Provider instance; "auto" reads installed certificates and searches otherwise.
    """
    config = config or BaseCaseConfig()
    if config.provider == "search":
        logging.info(f"Using search provider (budget {config.search_budget:g}s)")
        return SearchBaseProvider(config.search_budget)
    if config.provider == "file":
        logging.info("Using installed base certificates only")
        return DirectoryBaseProvider(create_store(config))
    if config.provider == "auto":
        return FallbackBaseProvider(
            DirectoryBaseProvider(create_store(config)), SearchBaseProvider(config.search_budget)
        )
    raise ParameterError(f"unknown base-case provider {config.provider!r}")


def create_lemma_builder(
    provider: Optional[BaseCaseProvider] = None,
    config: Optional[LemmaConfig] = None,
    metrics: Optional[BuildMetrics] = None,
) -> LemmaBuilder:
    """Create a LemmaBuilder with optional dependency injection.

    Args:
        provider: Optional provider; the default "auto" provider if omitted.
        config: Lemma configuration.
        metrics: Optional per-cell metrics recorder.

    Returns:
        LemmaBuilder instance.
    """
    config = config or LemmaConfig()
    if provider is None:
        provider = create_base_provider()
    return LemmaBuilder(provider, verify_each_build=config.verify_each_build, metrics=metrics)


def create_pipeline(
    config: Optional[PipelineConfig] = None,
    provider: Optional[BaseCaseProvider] = None,
    out_path: Optional[str] = None,
) -> ConstructionPipeline:
    """Create a fully wired construction pipeline.

    Args:
        config: Pipeline configuration; environment defaults if omitted.
        provider: Optional provider overriding ``config.base_case``.
        out_path: Certificate output file, or None to keep the text in memory.

    Returns:
        ConstructionPipeline instance.
    """
    config = config or PipelineConfig.from_env()
    if provider is None:
        provider = create_base_provider(config.base_case)
    metrics = BuildMetrics()
    builder = create_lemma_builder(provider, config.lemma, metrics)
    return ConstructionPipeline(config, builder, metrics=metrics, out_path=out_path)
