"""Build, derive, verify and write stages of the construction pipeline."""

import logging
import time
from pathlib import Path
from typing import Any, Optional

from ..certificate import render_certificate, render_sets
from ..derive import (
    cube_levels_from_structure,
    hamilton_from_structure,
    kneser_from_structure,
    singleton_kneser_cycle,
)
from ..exceptions import ParameterError, SelfVerificationError
from ..lemma_engine import LemmaBuilder
from ..verify import verify_certificate
from .base import ConstructionJob, PipelineContext, PipelineStage
from .config import ConstructConfig, VerifyConfig

logger = logging.getLogger(__name__)


class BuildStage(PipelineStage):
    """Builds the lemma cell the requested certificate is derived from."""

    def __init__(self, builder: LemmaBuilder, config: ConstructConfig):
        """Initialize the build stage.

        Args:
            builder: Lemma builder with its base-case provider.
            config: Construction configuration (size limit).
        """
        super().__init__()
        self.builder = builder
        self.config = config

    def validate_input(self, input_data: Any) -> bool:
        return isinstance(input_data, ConstructionJob)

    def execute(self, input_data: ConstructionJob, context: PipelineContext) -> ConstructionJob:
        request = input_data.request
        if request.n > self.config.max_n:
            raise ParameterError(
                f"n={request.n} exceeds the configured maximum {self.config.max_n}"
            )

        cell = request.required_cell()
        if cell is None:
            logger.info(f"{request} needs no lemma structure")
            return input_data

        start = time.perf_counter()
        input_data.structure = self.builder.build(*cell)
        elapsed = time.perf_counter() - start
        self.metrics["cell"] = f"({cell[0]},{cell[1]})"
        self.metrics["build_seconds"] = elapsed
        logger.info(f"Built lemma cell {cell} for {request} in {elapsed:.2f}s")
        return input_data


class DeriveStage(PipelineStage):
    """Turns the built structure into the requested certificate."""

    def validate_input(self, input_data: Any) -> bool:
        if not isinstance(input_data, ConstructionJob):
            return False
        return input_data.structure is not None or input_data.request.required_cell() is None

    def execute(self, input_data: ConstructionJob, context: PipelineContext) -> ConstructionJob:
        request, L = input_data.request, input_data.structure
        if request.graph == "h":
            cert = hamilton_from_structure(L)
        elif request.graph == "k":
            if L is None:
                cert = singleton_kneser_cycle(request.n)
            else:
                cert = kneser_from_structure(L, request.n)
        else:
            cert = cube_levels_from_structure(L, complemented=L.k != request.k)
        input_data.certificate = cert
        self.metrics["length"] = len(cert)
        self.metrics["graph_vertices"] = cert.coverage_claim[1]
        logger.info(f"Derived {request} certificate of length {len(cert)}")
        return input_data


class VerifyStage(PipelineStage):
    """Checks the certificate before anything is written."""

    def __init__(self, config: VerifyConfig):
        super().__init__()
        self.config = config

    def validate_input(self, input_data: Any) -> bool:
        return isinstance(input_data, ConstructionJob) and input_data.certificate is not None

    def execute(self, input_data: ConstructionJob, context: PipelineContext) -> ConstructionJob:
        report = verify_certificate(input_data.certificate, self.config.max_violations)
        input_data.report = report
        self.metrics["violations"] = len(report.violations)
        if not report.ok:
            raise SelfVerificationError(
                f"constructed {input_data.request} certificate failed verification:\n"
                + report.render()
            )
        logger.info(f"{input_data.request} certificate verified")
        return input_data


class WriteStage(PipelineStage):
    """Renders the certificate and optionally writes it to a file."""

    def __init__(self, config: ConstructConfig, out_path: Optional[str] = None):
        super().__init__()
        self.config = config
        self.out_path = out_path

    def validate_input(self, input_data: Any) -> bool:
        return isinstance(input_data, ConstructionJob) and input_data.certificate is not None

    def execute(self, input_data: ConstructionJob, context: PipelineContext) -> ConstructionJob:
        cert = input_data.certificate
        if self.config.format == "sets":
            text = render_sets(cert)
        elif self.config.format == "bits":
            text = render_certificate(cert)
        else:
            raise ParameterError(f"unknown output format {self.config.format!r}")
        input_data.output_text = text

        if self.out_path:
            path = Path(self.out_path)
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_text(text)
            tmp.replace(path)
            self.metrics["bytes_written"] = len(text.encode())
            logger.info(f"Wrote {input_data.request} certificate to {path}")
        return input_data
