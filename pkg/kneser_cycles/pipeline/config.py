"""Configuration classes for the construction pipeline."""

import os
from dataclasses import dataclass, field
from typing import Optional

import yaml

from ..config import MAX_N, MAX_VIOLATIONS, SEARCH_BUDGET

PROVIDER_CHOICES = ("auto", "search", "file")
FORMAT_CHOICES = ("bits", "sets")


@dataclass
class BaseCaseConfig:
    """Where middle-levels base cycles come from."""

    provider: str = "auto"  # Options: "auto", "search", "file"
    search_budget: float = SEARCH_BUDGET
    base_dir: Optional[str] = None  # None: KNESER_BASE_DIR or ./base-certs


@dataclass
class LemmaConfig:
    """Configuration for building lemma structures."""

    verify_each_build: bool = True


@dataclass
class ConstructConfig:
    """Configuration for certificate construction and output."""

    format: str = "bits"  # Options: "bits", "sets"
    max_n: int = MAX_N


@dataclass
class VerifyConfig:
    """Configuration for the verifier."""

    max_violations: int = MAX_VIOLATIONS


@dataclass
class MonitoringConfig:
    """Configuration for logging and metrics."""

    log_level: str = "WARNING"  # root level when -v is not given
    metrics_path: str = "kneser-metrics.json"
    save_metrics: bool = False


@dataclass
class PipelineConfig:
    """Main pipeline configuration."""

    base_case: BaseCaseConfig = field(default_factory=BaseCaseConfig)
    lemma: LemmaConfig = field(default_factory=LemmaConfig)
    construct: ConstructConfig = field(default_factory=ConstructConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    monitoring: MonitoringConfig = field(default_factory=MonitoringConfig)

    @classmethod
    def from_yaml(cls, path: str) -> "PipelineConfig":
        """Load configuration from YAML file."""
        with open(path) as f:
            data = yaml.safe_load(f) or {}

        pipeline_data = data.get("pipeline", {})

        return cls(
            base_case=BaseCaseConfig(**pipeline_data.get("base_case", {})),
            lemma=LemmaConfig(**pipeline_data.get("lemma", {})),
            construct=ConstructConfig(**pipeline_data.get("construct", {})),
            verify=VerifyConfig(**pipeline_data.get("verify", {})),
            monitoring=MonitoringConfig(**pipeline_data.get("monitoring", {})),
        )

    @classmethod
    def from_env(cls) -> "PipelineConfig":
        """Create configuration from environment variables and defaults."""
        config = cls()

        provider = os.getenv("KNESER_PROVIDER")
        if provider:
            config.base_case.provider = provider.lower()

        budget = os.getenv("KNESER_SEARCH_BUDGET")
        if budget:
            config.base_case.search_budget = float(budget)

        base_dir = os.getenv("KNESER_BASE_DIR")
        if base_dir:
            config.base_case.base_dir = base_dir

        max_n = os.getenv("KNESER_MAX_N")
        if max_n:
            config.construct.max_n = int(max_n)

        metrics_file = os.getenv("KNESER_METRICS_FILE")
        if metrics_file:
            config.monitoring.metrics_path = metrics_file

        log_level = os.getenv("LOG_LEVEL")
        if log_level:
            config.monitoring.log_level = log_level

        return config

    def to_yaml(self, path: str):
        """Save configuration to YAML file."""
        data = {
            "pipeline": {
                "base_case": {
                    "provider": self.base_case.provider,
                    "search_budget": self.base_case.search_budget,
                    "base_dir": self.base_case.base_dir,
                },
                "lemma": {
                    "verify_each_build": self.lemma.verify_each_build,
                },
                "construct": {
                    "format": self.construct.format,
                    "max_n": self.construct.max_n,
                },
                "verify": {
                    "max_violations": self.verify.max_violations,
                },
                "monitoring": {
                    "log_level": self.monitoring.log_level,
                    "metrics_path": self.monitoring.metrics_path,
                    "save_metrics": self.monitoring.save_metrics,
                },
            }
        }

        with open(path, "w") as f:
            yaml.dump(data, f, default_flow_style=False, sort_keys=False)
