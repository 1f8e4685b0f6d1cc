"""Orchestrates one certificate construction: build, derive, verify, write."""

import logging
from collections import OrderedDict
from datetime import datetime
from typing import Dict, List, Optional

from ..lemma_engine import LemmaBuilder
from ..metrics import BuildMetrics
from .base import (
    ConstructionJob,
    ConstructionRequest,
    ConstructionRun,
    PipelineContext,
    PipelineStage,
)
from .config import PipelineConfig
from .stages import BuildStage, DeriveStage, VerifyStage, WriteStage

logger = logging.getLogger(__name__)


class ConstructionPipeline:
    """Runs the construction stages in order for one request."""

    def __init__(
        self,
        config: PipelineConfig,
        builder: LemmaBuilder,
        metrics: Optional[BuildMetrics] = None,
        out_path: Optional[str] = None,
    ):
        """Initialize the pipeline with configuration.

        Args:
            config: Pipeline configuration.
            builder: Lemma builder (carries the base-case provider).
            metrics: Optional shared BuildMetrics; the builder's recorder if omitted.
            out_path: File to write the certificate to; None keeps it in memory only.
        """
        self.config = config
        self.builder = builder
        self.metrics = metrics or builder.metrics or BuildMetrics()
        if builder.metrics is None:
            builder.metrics = self.metrics
        self.stages: "OrderedDict[str, PipelineStage]" = OrderedDict()
        self.stages["build"] = BuildStage(builder, config.construct)
        self.stages["derive"] = DeriveStage()
        self.stages["verify"] = VerifyStage(config.verify)
        self.stages["write"] = WriteStage(config.construct, out_path=out_path)
        logger.info(f"Initialized pipeline with {len(self.stages)} stages")

    def add_stage(self, name: str, stage: PipelineStage, after: Optional[str] = None):
        """Add a custom stage, at the end or right after ``after``."""
        if after is None:
            self.stages[name] = stage
        else:
            if after not in self.stages:
                raise ValueError(f"Stage '{after}' not found")
            items = list(self.stages.items())
            index = next(i for i, (key, _) in enumerate(items) if key == after) + 1
            items.insert(index, (name, stage))
            self.stages = OrderedDict(items)
        logger.info(f"Added stage '{name}' to pipeline")

    def remove_stage(self, name: str):
        """Remove a stage from the pipeline."""
        if name not in self.stages:
            raise ValueError(f"Stage '{name}' not found")
        del self.stages[name]
        logger.info(f"Removed stage '{name}' from pipeline")

    def run(self, request: ConstructionRequest) -> ConstructionRun:
        """Execute all stages; any stage failure is logged and re-raised."""
        context = PipelineContext.create(config=self.config)
        logger.info(f"Starting pipeline run {context.run_id} for {request}")

        start_time = datetime.now()
        stages_completed: List[str] = []
        job = ConstructionJob(request)
        for stage in self.stages.values():
            stage.reset_metrics()

        for stage_name, stage in self.stages.items():
            logger.info(f"Executing stage: {stage_name}")
            stage_start = datetime.now()
            try:
                if not stage.validate_input(job):
                    raise ValueError(f"Invalid input for stage '{stage_name}'")
                job = stage.execute(job, context)
            except Exception as e:
                error_msg = f"Stage '{stage_name}' failed: {e}"
                logger.error(error_msg)
                context.add_error(error_msg)
                raise

            stages_completed.append(stage_name)
            stage_elapsed = (datetime.now() - stage_start).total_seconds()
            context.add_metric(f"{stage_name}_time", stage_elapsed)
            for key, value in stage.get_metrics().items():
                context.add_metric(f"{stage_name}_{key}", value)
            logger.info(f"Stage '{stage_name}' completed in {stage_elapsed:.2f}s")

        end_time = datetime.now()
        elapsed = (end_time - start_time).total_seconds()
        logger.info(f"Pipeline run {context.run_id} completed in {elapsed:.2f}s")

        if self.config.monitoring.save_metrics:
            self.metrics.save_summary(self.config.monitoring.metrics_path)

        return ConstructionRun(
            run_id=context.run_id,
            start_time=start_time,
            end_time=end_time,
            stages_completed=stages_completed,
            job=job,
            errors=context.errors,
            metrics=context.metrics,
        )

    def get_stage_metrics(self) -> Dict[str, Dict]:
        """Get metrics from all stages."""
        return {name: stage.get_metrics() for name, stage in self.stages.items()}
