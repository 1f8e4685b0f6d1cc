"""Tests for pipeline stages, the orchestrator, factories and build metrics."""

import dataclasses
import io
import json
from unittest.mock import MagicMock

import pytest

from kneser_cycles.exceptions import ParameterError, SelfVerificationError
from kneser_cycles.factory import (
    create_base_provider,
    create_lemma_builder,
    create_pipeline,
    create_store,
)
from kneser_cycles.lemma_engine import LemmaBuilder
from kneser_cycles.metrics import BuildMetrics
from kneser_cycles.pipeline.base import ConstructionJob, ConstructionRequest, PipelineStage
from kneser_cycles.pipeline.config import BaseCaseConfig, ConstructConfig, VerifyConfig
from kneser_cycles.pipeline.orchestrator import ConstructionPipeline
from kneser_cycles.pipeline.stages import BuildStage, DeriveStage, VerifyStage, WriteStage
from kneser_cycles.providers import (
    DirectoryBaseProvider,
    FallbackBaseProvider,
    SearchBaseProvider,
)

H41_TEXT = "H 4 1 8\n0010\n0111\n0001\n1101\n0100\n1110\n1000\n1011\n"


class TestConstructionRequest:
    """Test cases for ConstructionRequest."""

    @pytest.mark.parametrize(
        "graph,n,k,cell",
        [
            ("h", 4, 1, (4, 1)),
            ("k", 5, 2, (4, 1)),
            ("k", 5, 1, None),
            ("q", 4, 1, (4, 1)),
            ("q", 4, 2, (4, 1)),
            ("q", 5, 2, (5, 2)),
        ],
    )
    def test_required_cell(self, graph, n, k, cell):
        """Test which lemma cell each request is derived from."""
        assert ConstructionRequest(graph, n, k).required_cell() == cell

    @pytest.mark.parametrize("graph,n,k", [("x", 4, 1), ("h", 4, 2), ("k", 3, 0), ("q", 4, 3)])
    def test_invalid(self, graph, n, k):
        """Test request validation."""
        with pytest.raises(ParameterError):
            ConstructionRequest(graph, n, k)

    def test_str(self):
        """Test the readable form."""
        assert str(ConstructionRequest("h", 4, 1)) == "H(4,1)"


class TestStages:
    """Test cases for the individual stages."""

    def test_build_stage(self, builder, pipeline_context, structure_4_1):
        """Test that the build stage attaches the required cell."""
        stage = BuildStage(builder, ConstructConfig())
        job = stage.execute(ConstructionJob(ConstructionRequest("k", 5, 2)), pipeline_context)
        assert job.structure == structure_4_1
        assert stage.get_metrics()["cell"] == "(4,1)"

    def test_build_stage_size_limit(self, builder, pipeline_context):
        """Test the configured maximum n."""
        stage = BuildStage(builder, ConstructConfig(max_n=5))
        with pytest.raises(ParameterError, match="maximum 5"):
            stage.execute(ConstructionJob(ConstructionRequest("h", 6, 1)), pipeline_context)

    def test_build_stage_nothing_needed(self, builder, pipeline_context):
        """Test that K(n,1) needs no structure."""
        stage = BuildStage(builder, ConstructConfig())
        job = stage.execute(ConstructionJob(ConstructionRequest("k", 6, 1)), pipeline_context)
        assert job.structure is None

    @pytest.mark.parametrize(
        "graph,n,k,first",
        [("h", 4, 1, "0010"), ("k", 5, 2, "00101"), ("q", 4, 1, "0010"), ("q", 4, 2, "1101")],
    )
    def test_derive_stage(self, structure_4_1, pipeline_context, graph, n, k, first):
        """Test the certificate each graph derives from the (4,1) cell."""
        job = ConstructionJob(ConstructionRequest(graph, n, k), structure=structure_4_1)
        stage = DeriveStage()
        assert stage.validate_input(job)
        job = stage.execute(job, pipeline_context)
        assert str(job.certificate.order[0]) == first
        assert job.certificate.graph.k == k

    def test_derive_stage_singletons(self, pipeline_context):
        """Test K(n,1) without a structure."""
        job = ConstructionJob(ConstructionRequest("k", 4, 1))
        job = DeriveStage().execute(job, pipeline_context)
        assert len(job.certificate) == 4

    def test_derive_stage_needs_structure(self):
        """Test that H requests without a built cell are rejected."""
        assert not DeriveStage().validate_input(ConstructionJob(ConstructionRequest("h", 4, 1)))

    def test_verify_stage(self, structure_4_1, pipeline_context):
        """Test that a valid certificate passes and its report is kept."""
        job = ConstructionJob(ConstructionRequest("h", 4, 1), structure=structure_4_1)
        job = DeriveStage().execute(job, pipeline_context)
        job = VerifyStage(VerifyConfig()).execute(job, pipeline_context)
        assert job.report.ok

    def test_verify_stage_failure(self, structure_4_1, pipeline_context):
        """Test that a broken certificate stops the pipeline with exit code 4."""
        job = ConstructionJob(ConstructionRequest("h", 4, 1), structure=structure_4_1)
        job = DeriveStage().execute(job, pipeline_context)
        order = job.certificate.order
        job.certificate = dataclasses.replace(
            job.certificate, order=(order[1], order[0]) + order[2:]
        )
        with pytest.raises(SelfVerificationError) as exc_info:
            VerifyStage(VerifyConfig()).execute(job, pipeline_context)
        assert exc_info.value.exit_code == 4
        assert "FAIL" in str(exc_info.value)

    def test_write_stage_bits(self, structure_4_1, pipeline_context, tmp_path):
        """Test the bitstring output written to a file."""
        out = tmp_path / "h41.cert"
        job = ConstructionJob(ConstructionRequest("h", 4, 1), structure=structure_4_1)
        job = DeriveStage().execute(job, pipeline_context)
        job = WriteStage(ConstructConfig(), out_path=str(out)).execute(job, pipeline_context)
        assert job.output_text == H41_TEXT
        assert out.read_text() == H41_TEXT
        assert [p.name for p in tmp_path.iterdir()] == ["h41.cert"]

    def test_write_stage_sets(self, structure_4_1, pipeline_context):
        """Test the subset output kept in memory."""
        job = ConstructionJob(ConstructionRequest("k", 5, 2), structure=structure_4_1)
        job = DeriveStage().execute(job, pipeline_context)
        job = WriteStage(ConstructConfig(format="sets")).execute(job, pipeline_context)
        assert job.output_text.splitlines()[:2] == ["{3,5}", "{1,2}"]

    def test_write_stage_unknown_format(self, structure_4_1, pipeline_context):
        """Test that unknown formats are refused."""
        job = ConstructionJob(ConstructionRequest("h", 4, 1), structure=structure_4_1)
        job = DeriveStage().execute(job, pipeline_context)
        with pytest.raises(ParameterError):
            WriteStage(ConstructConfig(format="json")).execute(job, pipeline_context)


class TestConstructionPipeline:
    """Test cases for ConstructionPipeline."""

    def test_init(self, pipeline_config, builder):
        """Test the default stage order and shared metrics."""
        pipeline = ConstructionPipeline(pipeline_config, builder)
        assert list(pipeline.stages) == ["build", "derive", "verify", "write"]
        assert builder.metrics is pipeline.metrics

    def test_run_h41(self, pipeline_config, search_provider):
        """Test a full run producing the H(4,1) certificate."""
        pipeline = create_pipeline(pipeline_config, provider=search_provider)
        result = pipeline.run(ConstructionRequest("h", 4, 1))
        assert result.output_text == H41_TEXT
        assert result.stages_completed == ["build", "derive", "verify", "write"]
        assert result.certificate.coverage_claim == (8, 8)
        assert result.errors == []
        assert "build_time" in result.metrics
        assert result.metrics["derive_length"] == 8

    def test_run_writes_file(self, pipeline_config, search_provider, tmp_path):
        """Test that out_path receives the certificate."""
        out = tmp_path / "k52.cert"
        pipeline = create_pipeline(pipeline_config, provider=search_provider, out_path=str(out))
        pipeline.run(ConstructionRequest("k", 5, 2))
        assert out.read_text().splitlines()[0] == "K 5 2 8"

    def test_add_and_remove_stage(self, pipeline_config, builder):
        """Test inserting a stage after another and removing it again."""
        pipeline = ConstructionPipeline(pipeline_config, builder)
        pipeline.add_stage("audit", MagicMock(spec=PipelineStage), after="derive")
        assert list(pipeline.stages) == ["build", "derive", "audit", "verify", "write"]
        pipeline.remove_stage("audit")
        assert "audit" not in pipeline.stages
        with pytest.raises(ValueError):
            pipeline.remove_stage("audit")
        with pytest.raises(ValueError):
            pipeline.add_stage("x", MagicMock(spec=PipelineStage), after="missing")

    def test_stage_failure_is_reraised(self, pipeline_config, builder, caplog):
        """Test that a failing stage aborts the run and is logged."""
        pipeline = ConstructionPipeline(pipeline_config, builder)
        failing = MagicMock(spec=PipelineStage)
        failing.validate_input.return_value = True
        failing.execute.side_effect = RuntimeError("boom")
        pipeline.add_stage("boom", failing, after="build")

        with pytest.raises(RuntimeError, match="boom"):
            pipeline.run(ConstructionRequest("h", 4, 1))
        assert "Stage 'boom' failed" in caplog.text

    def test_invalid_stage_input(self, pipeline_config, builder):
        """Test that a stage refusing its input stops the run."""
        pipeline = ConstructionPipeline(pipeline_config, builder)
        picky = MagicMock(spec=PipelineStage)
        picky.validate_input.return_value = False
        pipeline.add_stage("picky", picky, after="build")
        with pytest.raises(ValueError, match="picky"):
            pipeline.run(ConstructionRequest("h", 4, 1))

    def test_saves_metrics(self, pipeline_config, search_provider, tmp_path):
        """Test that monitoring.save_metrics writes the JSON summary."""
        pipeline_config.monitoring.save_metrics = True
        pipeline_config.monitoring.metrics_path = str(tmp_path / "metrics.json")
        create_pipeline(pipeline_config, provider=search_provider).run(
            ConstructionRequest("h", 5, 1)
        )
        data = json.loads((tmp_path / "metrics.json").read_text())
        assert data["summary"]["cells"] == 3
        assert [c["part"] for c in data["cells"]] == ["a", "b", "b"]

    def test_stage_metrics(self, pipeline_config, search_provider):
        """Test per-stage metrics after a run."""
        pipeline = create_pipeline(pipeline_config, provider=search_provider)
        pipeline.run(ConstructionRequest("q", 5, 2))
        metrics = pipeline.get_stage_metrics()
        assert metrics["derive"]["length"] == 20
        assert metrics["verify"]["violations"] == 0

    def test_stage_metrics_reset_between_runs(self, pipeline_config, search_provider):
        """Test that a reused pipeline starts every run with empty stage metrics."""
        pipeline = create_pipeline(pipeline_config, provider=search_provider)
        pipeline.run(ConstructionRequest("q", 5, 2))
        pipeline.stages["verify"].metrics["stale"] = 1
        pipeline.run(ConstructionRequest("h", 4, 1))
        metrics = pipeline.get_stage_metrics()
        assert "stale" not in metrics["verify"]
        assert metrics["derive"]["length"] == 8

    @pytest.mark.integration
    def test_deterministic_output(self, pipeline_config):
        """Test that independent runs give byte-identical certificates."""
        requests = [
            ConstructionRequest("h", 9, 3),
            ConstructionRequest("k", 9, 3),
            ConstructionRequest("q", 8, 5),
            ConstructionRequest("k", 7, 1),
        ]
        for request in requests:
            first = create_pipeline(pipeline_config, provider=SearchBaseProvider(60.0))
            second = create_pipeline(pipeline_config, provider=SearchBaseProvider(60.0))
            assert first.run(request).output_text == second.run(request).output_text


class TestFactory:
    """Test cases for factory functions."""

    def test_search_provider(self):
        """Test the search provider with its budget."""
        provider = create_base_provider(BaseCaseConfig(provider="search", search_budget=7.0))
        assert isinstance(provider, SearchBaseProvider)
        assert provider.budget == 7.0

    def test_file_provider(self, tmp_path):
        """Test the directory provider over the configured directory."""
        provider = create_base_provider(BaseCaseConfig(provider="file", base_dir=str(tmp_path)))
        assert isinstance(provider, DirectoryBaseProvider)
        assert provider.store.directory == tmp_path

    def test_auto_provider(self, tmp_path):
        """Test that auto reads files first and searches second."""
        provider = create_base_provider(BaseCaseConfig(base_dir=str(tmp_path)))
        assert isinstance(provider, FallbackBaseProvider)
        assert isinstance(provider.primary, DirectoryBaseProvider)
        assert isinstance(provider.secondary, SearchBaseProvider)

    def test_unknown_provider(self):
        """Test that unknown provider names are refused."""
        with pytest.raises(ParameterError):
            create_base_provider(BaseCaseConfig(provider="oracle"))

    def test_create_store(self, base_dir):
        """Test that the store defaults to KNESER_BASE_DIR."""
        assert create_store().directory == base_dir.resolve()

    def test_create_lemma_builder(self, mock_provider):
        """Test builder creation with an injected provider."""
        builder = create_lemma_builder(mock_provider)
        assert isinstance(builder, LemmaBuilder)
        assert builder.provider is mock_provider
        assert builder.verify_each_build

    def test_builder_uses_provider(self, mock_provider):
        """Test that the injected provider supplies the diagonal cell."""
        create_lemma_builder(mock_provider).build(3, 1)
        mock_provider.middle_levels_cycle.assert_called_once_with(1)


class TestBuildMetrics:
    """Test cases for BuildMetrics."""

    def test_calculate_metrics(self):
        """Test the summary over recorded cells."""
        metrics = BuildMetrics()
        metrics.record_cell(3, 1, "a", 6, 3, 0.5)
        metrics.record_cell(4, 1, "b", 8, 4, 0.25)
        metrics.record_base_case(1, "search", 0.5)
        summary = metrics.calculate_metrics()
        assert summary["cells"] == 2
        assert summary["parts"] == {"a": 1, "b": 1}
        assert summary["total_seconds"] == 0.75
        assert summary["slowest_cell"] == {"n": 3, "k": 1, "seconds": 0.5}
        assert summary["largest_cycle"] == 8
        assert summary["base_cases"] == [{"k": 1, "source": "search", "seconds": 0.5}]

    def test_empty(self, tmp_path):
        """Test that nothing recorded saves nothing."""
        metrics = BuildMetrics()
        assert metrics.calculate_metrics() == {}
        assert metrics.save_summary(tmp_path / "m.json") == {}
        assert not (tmp_path / "m.json").exists()

    def test_save_summary_default_path(self, tmp_path, monkeypatch):
        """Test that KNESER_METRICS_FILE is the default destination."""
        target = tmp_path / "default.json"
        monkeypatch.setenv("KNESER_METRICS_FILE", str(target))
        metrics = BuildMetrics()
        metrics.record_cell(3, 1, "a", 6, 3, 0.1)
        metrics.save_summary()
        assert json.loads(target.read_text())["cells"][0]["n"] == 3

    def test_print_summary(self):
        """Test the printed summary."""
        metrics = BuildMetrics()
        metrics.record_cell(3, 1, "a", 6, 3, 0.1)
        stream = io.StringIO()
        metrics.print_summary(stream)
        assert "Cells built: 1" in stream.getvalue()
