"""Base classes and data models for the construction pipeline."""

import uuid
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

from ..certificate import HCycleCertificate
from ..exceptions import ParameterError
from ..lemma_engine import LemmaStructure
from ..verify import VerificationReport

GRAPH_CHOICES = ("h", "k", "q")


@dataclass(frozen=True)
class ConstructionRequest:
    """Which certificate to construct: H(n,k), K(n,k) or Q(n,k)."""

    graph: str
    n: int
    k: int

    def __post_init__(self):
        graph, n, k = self.graph, self.n, self.k
        if graph not in GRAPH_CHOICES:
            raise ParameterError(f"graph must be one of {', '.join(GRAPH_CHOICES)}, got {graph!r}")
        if graph == "q":
            if n < 3 or not 1 <= k <= n - 2:
                raise ParameterError(f"Q(n,k) needs n >= 3 and 1 <= k <= n-2, got ({n},{k})")
        elif k < 1 or n < 2 * k + 1:
            raise ParameterError(f"{graph.upper()}(n,k) needs k >= 1 and n >= 2k+1, got ({n},{k})")

    def required_cell(self) -> Optional[Tuple[int, int]]:
        """The lemma cell the certificate is derived from, or None if none is needed."""
        n, k = self.n, self.k
        if self.graph == "h":
            return (n, k)
        if self.graph == "k":
            return None if k == 1 else (n - 1, k - 1)
        return (n, k) if 2 * k + 1 <= n else (n, n - k - 1)

    def __str__(self) -> str:
        return f"{self.graph.upper()}({self.n},{self.k})"


@dataclass
class ConstructionJob:
    """State handed from stage to stage."""

    request: ConstructionRequest
    structure: Optional[LemmaStructure] = None
    certificate: Optional[HCycleCertificate] = None
    report: Optional[VerificationReport] = None
    output_text: Optional[str] = None


@dataclass
class PipelineContext:
    """Context passed through pipeline stages."""

    run_id: str
    start_time: datetime
    config: Any  # Will be PipelineConfig
    metrics: Dict[str, Any] = field(default_factory=dict)
    errors: List[str] = field(default_factory=list)

    @classmethod
    def create(cls, config: Any) -> "PipelineContext":
        """Create a new pipeline context."""
        return cls(run_id=str(uuid.uuid4()), start_time=datetime.now(), config=config)

    def add_metric(self, key: str, value: Any):
        """Add a metric to the context."""
        if key in self.metrics and isinstance(self.metrics[key], (int, float)):
            self.metrics[key] += value
        else:
            self.metrics[key] = value

    def add_error(self, error: str):
        """Add an error to the context."""
        self.errors.append(error)


@dataclass
class ConstructionRun:
    """Result of a complete pipeline execution."""

    run_id: str
    start_time: datetime
    end_time: datetime
    stages_completed: List[str]
    job: ConstructionJob
    errors: List[str]
    metrics: Dict[str, Any]

    @property
    def certificate(self) -> Optional[HCycleCertificate]:
        return self.job.certificate

    @property
    def output_text(self) -> Optional[str]:
        return self.job.output_text


class PipelineStage(ABC):
    """Base interface for all pipeline stages."""

    def __init__(self):
        self.metrics: Dict[str, Any] = {}
        self.name = self.__class__.__name__

    @abstractmethod
    def execute(self, input_data: ConstructionJob, context: PipelineContext) -> ConstructionJob:
        """Execute the stage logic."""
        pass

    @abstractmethod
    def validate_input(self, input_data: Any) -> bool:
        """Validate stage input."""
        pass

    def get_metrics(self) -> Dict[str, Any]:
        """Return stage-specific metrics."""
        return self.metrics

    def reset_metrics(self):
        """Reset stage metrics."""
        self.metrics = {}
