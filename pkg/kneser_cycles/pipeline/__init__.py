"""Construction pipeline: build, derive, verify and write certificates."""

from .base import (
    ConstructionJob,
    ConstructionRequest,
    ConstructionRun,
    PipelineContext,
    PipelineStage,
)
from .config import (
    BaseCaseConfig,
    ConstructConfig,
    LemmaConfig,
    MonitoringConfig,
    PipelineConfig,
    VerifyConfig,
)
from .orchestrator import ConstructionPipeline
from .stages import BuildStage, DeriveStage, VerifyStage, WriteStage

__all__ = [
    # Base classes
    "ConstructionJob",
    "ConstructionRequest",
    "ConstructionRun",
    "PipelineContext",
    "PipelineStage",
    # Configuration
    "BaseCaseConfig",
    "LemmaConfig",
    "ConstructConfig",
    "VerifyConfig",
    "MonitoringConfig",
    "PipelineConfig",
    # Stages
    "BuildStage",
    "DeriveStage",
    "VerifyStage",
    "WriteStage",
    # Orchestrator
    "ConstructionPipeline",
]
