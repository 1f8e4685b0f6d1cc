"""Tests for the inductive lemma construction."""

from unittest.mock import MagicMock

import pytest

from kneser_cycles.bitcore import Vertex, binomial, make_a, make_b
from kneser_cycles.exceptions import (
    CertificateParseError,
    InvariantViolationError,
    ParameterError,
)
from kneser_cycles.lemma_engine import (
    LemmaBuilder,
    PathKind,
    auxiliary_k1,
    build,
    build_base_a,
    build_k1,
    build_step_c,
    canonicalize,
    compute_xy_partition,
    make_special_path,
    parse_lemma_dump,
    prepare_step_c,
    render_lemma_dump,
)
from kneser_cycles.metrics import BuildMetrics
from kneser_cycles.middle_levels import MiddleLevelsCycle
from kneser_cycles.providers import BaseCaseProvider
from kneser_cycles.verify import verify_lemma_structure


def vs(*texts):
    return tuple(Vertex.from_string(t) for t in texts)


CYCLE_4_1 = vs("0001", "0011", "0010", "1010", "1000", "1100", "0100", "0101")
PATHS_4_1 = {vs("0011", "0111"), vs("0101", "1101"), vs("1100", "1110"), vs("1010", "1011")}


class TestSpecialPaths:
    """Test cases for the anchoring paths D, A and B."""

    def test_d(self):
        """Test D(4,1)."""
        assert make_special_path(PathKind.D, 4, 1).order == vs("0001", "0011", "0010")

    def test_a(self):
        """Test A(5,1) climbing the trailing-ones anchors."""
        assert make_special_path("A", 5, 1).order == vs("00011", "00111", "01111")

    def test_b_empty_on_diagonal(self):
        """Test that B(2k+1,k) is empty."""
        assert len(make_special_path(PathKind.B, 5, 2)) == 0

    def test_b(self):
        """Test B(6,2) = (b(6,3))."""
        assert make_special_path(PathKind.B, 6, 2).order == (make_b(6, 3),)

    def test_invalid_parameters(self):
        """Test that n >= 2k+1 is required."""
        with pytest.raises(ParameterError):
            make_special_path(PathKind.A, 4, 2)


class TestPartA:
    """Test cases for the middle-levels cells."""

    def test_hexagon_cell(self, search_provider, hexagon):
        """Test cell (3,1): the hexagon plus singleton paths."""
        L = build_base_a(1, search_provider)
        assert L.cycle == hexagon.order
        assert set(L.paths.values()) == {vs("011"), vs("110"), vs("101")}
        assert L.part == "a"

    def test_k2_cell(self, search_provider):
        """Test cell (5,2): a 20-vertex cycle and 10 singleton paths."""
        L = build_base_a(2, search_provider)
        assert len(L.cycle) == 20
        assert len(L.paths) == 10
        assert all(len(path) == 1 for path in L.paths.values())
        assert verify_lemma_structure(L).ok

    def test_broken_provider_cycle(self):
        """Test that a provider cycle with a non-edge fails the post-build check."""
        broken = MiddleLevelsCycle(1, vs("001", "011", "010", "110", "101", "100"))
        provider = MagicMock(spec=BaseCaseProvider)
        provider.middle_levels_cycle.return_value = broken
        provider.describe.return_value = "broken"

        with pytest.raises(InvariantViolationError) as exc_info:
            LemmaBuilder(provider).build(3, 1)
        assert exc_info.value.clause == "cycle adjacency"
        assert (exc_info.value.n, exc_info.value.k) == (3, 1)


class TestPartB:
    """Test cases for the k = 1 cells."""

    def test_cycle_4_1(self, structure_4_1):
        """Test the canonical cycle of cell (4,1)."""
        assert structure_4_1.cycle == CYCLE_4_1
        assert structure_4_1.part == "b"

    def test_certificate_order_4_1(self, structure_4_1):
        """Test the traversal starting at b(4,1)."""
        expected = vs("0010", "0011", "0001", "0101", "0100", "1100", "1000", "1010")
        assert structure_4_1.certificate_order() == expected

    def test_paths_4_1(self, structure_4_1):
        """Test the four paths of cell (4,1)."""
        assert set(structure_4_1.paths.values()) == PATHS_4_1

    def test_swap_moves_b_off_the_paths(self):
        """Test that before the swap a rotated A path holds B(n,1), and not after."""
        for n in (5, 6, 7):
            _, aux_paths = auxiliary_k1(n)
            b_path = make_special_path(PathKind.B, n, 1).order
            assert set(b_path) < set(aux_paths[1])
            L = build_k1(n)
            assert not any(L.path_containing(v) for v in b_path)
            assert verify_lemma_structure(L).ok

    def test_n_too_small(self):
        """Test that part (b) starts at n = 4."""
        with pytest.raises(ParameterError):
            build_k1(3)


class TestLemmaStructure:
    """Test cases for LemmaStructure helpers."""

    def test_end_vertices(self, structure_4_1):
        """Test path ends ordered by path start."""
        assert structure_4_1.end_vertices() == list(vs("0111", "1101", "1011", "1110"))

    def test_path_containing(self, structure_4_1):
        """Test the path lookup by vertex."""
        assert structure_4_1.path_containing(Vertex.from_string("1101")) == (
            Vertex.from_string("0101"),
            1,
        )
        assert structure_4_1.path_containing(Vertex.from_string("0001")) is None

    def test_n_choose_k(self, structure_4_1):
        """Test the level-k size."""
        assert structure_4_1.N == 4

    def test_canonicalize_needs_anchors(self):
        """Test that a cycle without D(n,k) cannot be canonicalized."""
        with pytest.raises(InvariantViolationError):
            canonicalize(vs("0100", "1100", "1000", "1010"), 4, 1)


class TestPartC:
    """Test cases for the induction step from row n-1."""

    def test_xy_partition_6_2(self, builder):
        """Test X, Y and E_X for the step to (6,2)."""
        sub_k, sub_km1 = builder.build(5, 2), builder.build(5, 1)
        X, Y, e_x = compute_xy_partition(sub_k, sub_km1)
        assert X == frozenset(vs("01101", "10011", "11010", "11100"))
        assert Y == frozenset(vs("01011", "10101", "10110", "11001"))
        assert set(e_x) == set(X)
        assert not {make_a(5, 4), make_b(5, 3)} & set(e_x.values())
        assert make_a(5, 4) == Vertex.from_string("01111")
        assert make_b(5, 3) == Vertex.from_string("01110")

    def test_path_families_6_2(self, builder):
        """Test the path counts 9 + 6 of the (6,2) step."""
        scratch = prepare_step_c(6, 2, builder.build(5, 2), builder.build(5, 1))
        assert len(scratch.p0) == 9
        assert len(scratch.p1) == 6
        assert scratch.c0_minus[0] == make_b(5, 2)
        assert scratch.c0_minus[-1] == make_a(5, 2)
        assert scratch.c1_minus[0] == make_b(5, 2)
        assert scratch.c1_minus[-1] == make_a(5, 2)

    def test_matching_6_2(self, builder):
        """Test the last-bit edges: two on the cycle, one per y in Y."""
        scratch = prepare_step_c(6, 2, builder.build(5, 2), builder.build(5, 1))
        assert scratch.matching[:2] == [
            (make_b(6, 2), make_a(6, 3)),
            (Vertex.from_string("001100"), Vertex.from_string("001101")),
        ]
        assert len(scratch.matching) == 2 + len(scratch.Y)
        L = build_step_c(6, 2, builder.build(5, 2), builder.build(5, 1))
        for low, high in scratch.matching[2:]:
            assert L.paths[L.path_containing(low)[0]][-1] == high

    def test_cell_6_2(self, builder):
        """Test cell (6,2): 30-cycle, 15 paths, all conditions."""
        L = build_step_c(6, 2, builder.build(5, 2), builder.build(5, 1))
        assert L.part == "c"
        assert len(L.cycle) == 30
        assert len(L.paths) == 15
        assert L.cycle[:3] == make_special_path(PathKind.D, 6, 2).order
        assert verify_lemma_structure(L).ok

    def test_wrong_substructures(self, builder, structure_4_1):
        """Test that the step checks which cells it receives."""
        with pytest.raises(ParameterError):
            build_step_c(6, 2, structure_4_1, builder.build(5, 1))
        with pytest.raises(ParameterError):
            build_step_c(5, 2, builder.build(4, 1), builder.build(4, 1))


class TestLemmaBuilder:
    """Test cases for LemmaBuilder."""

    @pytest.mark.parametrize("n,k,part", [(5, 2, "a"), (6, 1, "b"), (6, 2, "c")])
    def test_dispatch(self, builder, n, k, part):
        """Test which construction produces each cell."""
        assert builder.build(n, k).part == part

    def test_iter_rows(self, builder):
        """Test row contents, with and without a k limit."""
        rows = dict(builder.iter_rows(7))
        assert sorted(rows) == [3, 4, 5, 6, 7]
        assert sorted(rows[7]) == [1, 2, 3]
        limited = dict(builder.iter_rows(7, 2))
        assert sorted(limited[7]) == [1, 2]

    def test_rebuild_is_identical(self, builder, grid):
        """Test that a fresh build equals the grid cell exactly."""
        fresh = builder.build(8, 3)
        assert fresh == grid[(8, 3)]
        assert fresh.cycle == grid[(8, 3)].cycle

    def test_invalid_parameters(self, builder):
        """Test parameter validation."""
        with pytest.raises(ParameterError):
            builder.build(4, 2)
        with pytest.raises(ParameterError):
            builder.build(3, 0)

    def test_records_metrics(self, search_provider):
        """Test per-cell and base-case metrics."""
        metrics = BuildMetrics()
        LemmaBuilder(search_provider, metrics=metrics).build(5, 2)
        assert [(c["n"], c["k"], c["part"]) for c in metrics.cells] == [
            (3, 1, "a"),
            (4, 1, "b"),
            (5, 1, "b"),
            (5, 2, "a"),
        ]
        assert [b["k"] for b in metrics.base_cases] == [1, 2]

    def test_without_verification(self, search_provider):
        """Test that disabling the per-cell check still builds valid cells."""
        L = LemmaBuilder(search_provider, verify_each_build=False).build(7, 2)
        assert verify_lemma_structure(L).ok

    def test_module_level_build(self, search_provider, structure_4_1):
        """Test the functional entry point."""
        assert build(4, 1, search_provider) == structure_4_1


@pytest.mark.integration
class TestGrid:
    """Grid-wide properties of built cells."""

    def test_all_cells_verify(self, grid):
        """Test every cell with n <= 12, k <= 3."""
        for (n, k), L in grid.items():
            report = verify_lemma_structure(L)
            assert report.ok, f"({n},{k}): {report.render()}"

    def test_counts(self, grid):
        """Test cycle length 2*C(n,k), C(n,k) paths and full level n-k coverage."""
        for (n, k), L in grid.items():
            assert len(L.cycle) == 2 * binomial(n, k)
            assert len(L.paths) == binomial(n, k)
            ends = set(L.end_vertices())
            assert len(ends) == binomial(n, n - k)
            assert all(v.level == n - k for v in ends)

    def test_a_path(self, grid):
        """Test that the path at a(n,k+1) is A(n,k)."""
        for (n, k), L in grid.items():
            assert L.paths[make_a(n, k + 1)] == make_special_path(PathKind.A, n, k).order

    def test_paths_disjoint(self, grid):
        """Test that no vertex lies on two paths."""
        for L in grid.values():
            flat = [v for path in L.paths.values() for v in path]
            assert len(flat) == len(set(flat))

    def test_unstrengthened_statement(self, grid):
        """Test that every cell also passes without conditions (i)-(iii)."""
        for L in grid.values():
            assert verify_lemma_structure(L, conditions=False).ok


@pytest.mark.slow
class TestFullGrid:
    """Every cell with k <= 4 and n <= 16."""

    def test_grid_to_16(self, search_provider):
        """Test that all cells build and verify."""
        cells = 0
        for n, row in LemmaBuilder(search_provider).iter_rows(16, 4):
            for k, L in row.items():
                assert verify_lemma_structure(L).ok, f"({n},{k})"
                assert len(L.paths) == binomial(n, k)
                cells += 1
        assert cells == sum(min(4, (n - 1) // 2) for n in range(3, 17))


class TestLemmaDump:
    """Test cases for LEMMA dump output and parsing."""

    def test_render_header(self, structure_4_1):
        """Test the first lines of a dump."""
        lines = render_lemma_dump(structure_4_1).splitlines()
        assert lines[:3] == ["LEMMA 4 1", "CYCLE", "0001"]
        assert lines.count("PATH") == 4

    def test_parse_rendered(self, structure_4_1):
        """Test that parsing a rendered dump gives an equal structure."""
        parsed = parse_lemma_dump(render_lemma_dump(structure_4_1))
        assert parsed == structure_4_1
        assert parsed.part == "dump"
        assert verify_lemma_structure(parsed).ok

    @pytest.mark.parametrize(
        "text,message,line",
        [
            ("LEMMA 4\nCYCLE\n", "header must be", 1),
            ("LEMMA 3 1\n001\n", "expected CYCLE", 2),
            ("LEMMA 3 1\nCYCLE\n001\nPATH\nPATH\n011\n", "empty path", 4),
            ("LEMMA 3 1\nCYCLE\n001\nPATH\n011\nPATH\n011\n", "second path", 6),
            ("LEMMA 3 1\nCYCLE\n0011\n", "bad length", 3),
        ],
    )
    def test_parse_errors(self, text, message, line):
        """Test malformed dumps."""
        with pytest.raises(CertificateParseError, match=message) as exc_info:
            parse_lemma_dump(text)
        assert exc_info.value.line == line
