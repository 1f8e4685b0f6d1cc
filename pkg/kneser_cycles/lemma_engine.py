"""Inductive construction of a saturating cycle with vertex-disjoint monotone paths.

For every k >= 1 and n >= 2k+1 a :class:`LemmaStructure` holds a cycle in
levels k and k+1 of Q(n) visiting all of level k, and one monotone path from
each level-(k+1) cycle vertex up to level n-k, the paths covering level n-k.
Three conditions pin the anchors so structures can be glued:

* the cycle contains D(n,k) = (a(n,k), a(n,k+1), b(n,k)) consecutively,
* the path starting at a(n,k+1) is A(n,k) = (a(n,k+1), ..., a(n,n-k)),
* no path meets B(n,k) = (b(n,k+1), ..., b(n,n-k-1)).

Cells are built row by row over n: the diagonal n = 2k+1 from a base-case
provider, k = 1 from rotations, everything else from the two cells of the
previous row.
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import (
    TYPE_CHECKING,
    Dict,
    FrozenSet,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .bitcore import (
    Vertex,
    append_bit,
    apply_permutation,
    binomial,
    level_vertices,
    make_a,
    make_b,
    rotate,
    swap_positions,
)
from .certificate import LEMMA_TAG, body_lines, parse_int, parse_vertex_line, split_header
from .exceptions import CertificateParseError, InvariantViolationError, ParameterError
from .middle_levels import normalize_anchor
from .providers import BaseCaseProvider
from .verify import verify_lemma_structure

if TYPE_CHECKING:
    from .metrics import BuildMetrics

logger = logging.getLogger(__name__)

Path = Tuple[Vertex, ...]


def _check_parameters(n: int, k: int):
    if k < 1 or n < 2 * k + 1:
        raise ParameterError(f"need k >= 1 and n >= 2k+1, got (n,k)=({n},{k})")


class PathKind(str, Enum):
    D = "D"
    A = "A"
    B = "B"


@dataclass(frozen=True)
class SpecialPath:
    """One of the anchoring paths D(n,k), A(n,k), B(n,k)."""

    kind: PathKind
    n: int
    k: int
    order: Path

    def __len__(self) -> int:
        return len(self.order)


def make_special_path(kind: Union[PathKind, str], n: int, k: int) -> SpecialPath:
    """D(n,k), A(n,k) or B(n,k); B is empty when n = 2k+1."""
    kind = PathKind(kind)
    _check_parameters(n, k)
    if kind == PathKind.D:
        order: Path = (make_a(n, k), make_a(n, k + 1), make_b(n, k))
    elif kind == PathKind.A:
        order = tuple(make_a(n, j) for j in range(k + 1, n - k + 1))
    else:
        order = tuple(make_b(n, j) for j in range(k + 1, n - k))
    return SpecialPath(kind, n, k, order)


@dataclass(frozen=True)
class LemmaStructure:
    """The cycle and path family for one (n, k).

    ``cycle`` is stored in canonical form, starting a(n,k), a(n,k+1), b(n,k).
    ``paths`` maps each level-(k+1) cycle vertex to the monotone path starting
    there. ``part`` records which construction produced the cell.
    """

    n: int
    k: int
    cycle: Path
    paths: Dict[Vertex, Path]
    part: str = field(default="", compare=False)

    @property
    def N(self) -> int:
        return binomial(self.n, self.k)

    @cached_property
    def cycle_index(self) -> Dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.cycle)}

    @cached_property
    def path_index(self) -> Dict[Vertex, Tuple[Vertex, int]]:
        index = {}
        for key, path in self.paths.items():
            for offset, v in enumerate(path):
                index[v] = (key, offset)
        return index

    def end_vertices(self) -> List[Vertex]:
        """Last vertex of every path, in order of path start."""
        return [self.paths[key][-1] for key in sorted(self.paths)]

    def path_containing(self, v: Vertex) -> Optional[Tuple[Vertex, int]]:
        """``(start, offset)`` of the path through ``v``, or None."""
        return self.path_index.get(v)

    def certificate_order(self) -> Path:
        """The cycle traversed from b(n,k) towards a(n,k+1) and a(n,k)."""
        n, k, cycle = self.n, self.k, self.cycle
        length = len(cycle)
        start = self.cycle_index[make_b(n, k)]
        step = -1 if cycle[(start - 1) % length] == make_a(n, k + 1) else 1
        return tuple(cycle[(start + step * i) % length] for i in range(length))


@dataclass
class InductionScratch:
    """Intermediate objects of the step from row n-1 to (n, k).

    ``c0_minus`` runs from b(n-1,k) to a(n-1,k) after a(n-1,k+1) was cut out
    of the (n-1,k) cycle; ``c1_minus`` runs from b(n-1,k) through the
    (n-1,k-1) cycle to a(n-1,k). ``e_x`` maps every x in X to the top vertex
    of the (n-1,k-1) path through x. ``matching`` lists the used edges that
    flip the last bit, each as (end in copy 0, end in copy 1): the two that
    close the cycle, then one per y in Y extending a path of ``p0``.
    """

    n: int
    k: int
    c0_minus: Path
    c1_minus: Path
    X: FrozenSet[Vertex]
    Y: FrozenSet[Vertex]
    e_x: Dict[Vertex, Vertex]
    p0: List[Path] = field(default_factory=list)
    p1: List[Path] = field(default_factory=list)
    matching: List[Tuple[Vertex, Vertex]] = field(default_factory=list)


def canonicalize(cycle: Sequence[Vertex], n: int, k: int) -> Path:
    """Rotate and orient ``cycle`` to start a(n,k), a(n,k+1), b(n,k)."""
    length = len(cycle)
    anchors = make_special_path(PathKind.D, n, k).order
    try:
        start = list(cycle).index(anchors[0])
    except ValueError:
        raise InvariantViolationError("condition (i)", n, k, f"{anchors[0]} not on cycle") from None
    for step in (1, -1):
        oriented = tuple(cycle[(start + step * i) % length] for i in range(length))
        if oriented[:3] == anchors:
            return oriented
    raise InvariantViolationError("condition (i)", n, k, "D(n,k) is not consecutive")


def build_base_a(k: int, provider: BaseCaseProvider) -> LemmaStructure:
    """Cell (2k+1, k): normalized middle-levels cycle plus singleton paths."""
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    n = 2 * k + 1
    base = normalize_anchor(provider.middle_levels_cycle(k))
    cycle = canonicalize(base.order, n, k)
    paths = {v: (v,) for v in level_vertices(n, k + 1)}
    return LemmaStructure(n, k, cycle, paths, part="a")


def auxiliary_k1(n: int) -> Tuple[Path, List[Path]]:
    """Cycle and paths for k = 1 before the last two positions are swapped.

    The cycle is the union of all rotations of D(n,1); path ``i`` is A(n,1)
    rotated by ``i``.
    """
    a1, a2 = make_a(n, 1), make_a(n, 2)
    cycle: List[Vertex] = []
    for shift in range(n):
        cycle.extend((rotate(a1, shift), rotate(a2, shift)))
    a_path = make_special_path(PathKind.A, n, 1).order
    paths = [tuple(rotate(v, shift) for v in a_path) for shift in range(n)]
    return tuple(cycle), paths


def build_k1(n: int) -> LemmaStructure:
    """Cell (n, 1) for n >= 4."""
    if n < 4:
        raise ParameterError(f"build_k1 needs n >= 4, got {n}")
    aux_cycle, aux_paths = auxiliary_k1(n)
    # rotation by one puts B(n,1) on a path; swapping the last two positions moves it off
    swap = swap_positions(n, n - 1, n)
    cycle = [apply_permutation(v, swap) for v in aux_cycle]
    paths: Dict[Vertex, Path] = {}
    for path in aux_paths:
        swapped = tuple(apply_permutation(v, swap) for v in path)
        paths[swapped[0]] = swapped
    return LemmaStructure(n, 1, canonicalize(cycle, n, 1), paths, part="b")


def _check_step_inputs(n: int, k: int, sub_k: LemmaStructure, sub_km1: LemmaStructure):
    if k < 2 or n < 2 * k + 2:
        raise ParameterError(f"step (c) needs k >= 2 and n >= 2k+2, got (n,k)=({n},{k})")
    if (sub_k.n, sub_k.k) != (n - 1, k) or (sub_km1.n, sub_km1.k) != (n - 1, k - 1):
        raise ParameterError(
            f"step (c) for ({n},{k}) needs cells ({n - 1},{k}) and ({n - 1},{k - 1}), "
            f"got ({sub_k.n},{sub_k.k}) and ({sub_km1.n},{sub_km1.k})"
        )
    for sub in (sub_k, sub_km1):
        if sub.cycle[:3] != make_special_path(PathKind.D, sub.n, sub.k).order:
            raise InvariantViolationError(
                "condition (i)", sub.n, sub.k, "cycle is not in canonical form"
            )


def compute_xy_partition(
    sub_k: LemmaStructure, sub_km1: LemmaStructure
) -> Tuple[FrozenSet[Vertex], FrozenSet[Vertex], Dict[Vertex, Vertex]]:
    """Split the path ends of the (n-1,k) cell by membership in the (n-1,k-1) paths.

    Returns ``(X, Y, E_X)`` where ``E_X`` maps each x in X to the last vertex
    of the (n-1,k-1) path through x; the ends a(n-1,n-k-1) and b(n-1,n-k-1)
    belong to neither set.
    """
    m, k = sub_k.n, sub_k.k
    top = m - k
    excluded = {make_a(m, top), make_b(m, top)}
    xs, ys = set(), set()
    e_x: Dict[Vertex, Vertex] = {}
    for end in sub_k.end_vertices():
        if end in excluded:
            continue
        hit = sub_km1.path_containing(end)
        if hit is None:
            ys.add(end)
            continue
        path = sub_km1.paths[hit[0]]
        if hit[1] != len(path) - 2:
            raise InvariantViolationError(
                "path end level", m, k - 1, f"{end} is not next to the end of its path"
            )
        xs.add(end)
        e_x[end] = path[-1]
    forbidden = {make_b(m, top), make_a(m, top + 1)}
    for x, w in e_x.items():
        if w in forbidden:
            raise InvariantViolationError("E_X exclusion", m, k - 1, f"edge {x}-{w}")
    return frozenset(xs), frozenset(ys), e_x


def prepare_step_c(
    n: int, k: int, sub_k: LemmaStructure, sub_km1: LemmaStructure
) -> InductionScratch:
    """Cut both cells open and assemble the two path families."""
    _check_step_inputs(n, k, sub_k, sub_km1)
    m = n - 1
    c0, c1 = sub_k.cycle, sub_km1.cycle
    b_low = make_b(m, k)
    if b_low in sub_km1.cycle_index:
        raise InvariantViolationError("cycle visits b(n,k+1)", m, k - 1, f"{b_low} on cycle")

    c0_minus = c0[2:] + c0[:1]
    c1_minus = (b_low,) + c1[2:] + c1[:2]
    xs, ys, e_x = compute_xy_partition(sub_k, sub_km1)
    scratch = InductionScratch(n, k, c0_minus, c1_minus, xs, ys, e_x)

    a_start = make_a(m, k + 1)
    b_end = make_b(m, m - k)
    b_extension = make_a(m, m - k + 1)
    for key in sorted(sub_k.paths):
        if key == a_start:
            continue
        path = sub_k.paths[key]
        end = path[-1]
        if end in e_x:
            scratch.p0.append(path + (e_x[end],))
        elif end == b_end:
            scratch.p0.append(path + (b_extension,))
        else:
            scratch.p0.append(path)

    for key in sorted(sub_km1.paths):
        scratch.p1.append(sub_km1.paths[key][:-1])
    scratch.p1.append(make_special_path(PathKind.B, m, k - 1).order)

    scratch.matching = [
        (make_b(n, k), make_a(n, k + 1)),
        (append_bit(b_low, 0), append_bit(b_low, 1)),
    ]
    scratch.matching.extend((append_bit(y, 0), append_bit(y, 1)) for y in sorted(ys))
    return scratch


def build_step_c(
    n: int, k: int, sub_k: LemmaStructure, sub_km1: LemmaStructure
) -> LemmaStructure:
    """Cell (n, k) for k >= 2, n >= 2k+2 from cells (n-1, k) and (n-1, k-1)."""
    scratch = prepare_step_c(n, k, sub_k, sub_km1)
    c1 = sub_km1.cycle
    cycle = (
        tuple(append_bit(v, 1) for v in c1[:2])
        + tuple(append_bit(v, 0) for v in reversed(scratch.c0_minus))
        + (append_bit(scratch.c1_minus[0], 1),)
        + tuple(append_bit(v, 1) for v in c1[2:])
    )

    rise = dict(scratch.matching)
    paths: Dict[Vertex, Path] = {}
    for path in scratch.p0:
        lifted = tuple(append_bit(v, 0) for v in path)
        if lifted[-1] in rise:
            lifted += (rise[lifted[-1]],)
        paths[lifted[0]] = lifted
    for path in scratch.p1:
        lifted = tuple(append_bit(v, 1) for v in path)
        paths[lifted[0]] = lifted
    expected = binomial(n, k)
    if len(paths) != expected:
        raise InvariantViolationError(
            "path count", n, k, f"{len(paths)} paths, expected {expected}"
        )
    return LemmaStructure(n, k, cycle, paths, part="c")


class LemmaBuilder:
    """Builds cells row by row, keeping only the previous row."""

    def __init__(
        self,
        provider: BaseCaseProvider,
        verify_each_build: bool = True,
        metrics: Optional["BuildMetrics"] = None,
    ):
        """Initialize the builder.

        Args:
            provider: Source of middle-levels cycles for the diagonal cells.
            verify_each_build: Re-check every cell before it is handed out.
            metrics: Optional per-cell build metrics recorder.
        """
        self.provider = provider
        self.verify_each_build = verify_each_build
        self.metrics = metrics

    def _build_cell(self, n: int, k: int, previous: Dict[int, LemmaStructure]) -> LemmaStructure:
        started = time.perf_counter()
        if n == 2 * k + 1:
            logger.debug(f"({n},{k}): middle levels base case")
            cell = build_base_a(k, self.provider)
        elif k == 1:
            logger.debug(f"({n},{k}): rotation construction")
            cell = build_k1(n)
        else:
            logger.debug(f"({n},{k}): step from ({n - 1},{k}) and ({n - 1},{k - 1})")
            cell = build_step_c(n, k, previous[k], previous[k - 1])
        if self.verify_each_build:
            report = verify_lemma_structure(cell)
            violation = report.first()
            if violation is not None:
                raise InvariantViolationError(violation.clause, n, k, violation.render())
        if self.metrics is not None:
            elapsed = time.perf_counter() - started
            self.metrics.record_cell(n, k, cell.part, len(cell.cycle), len(cell.paths), elapsed)
            if cell.part == "a":
                self.metrics.record_base_case(k, self.provider.describe(), elapsed)
        return cell

    def iter_rows(
        self, n_max: int, k_max: Optional[int] = None
    ) -> Iterator[Tuple[int, Dict[int, LemmaStructure]]]:
        """Yield ``(n, {k: cell})`` for n = 3..n_max and 1 <= k <= k_max, 2k+1 <= n."""
        previous: Dict[int, LemmaStructure] = {}
        for n in range(3, n_max + 1):
            top = (n - 1) // 2 if k_max is None else min(k_max, (n - 1) // 2)
            row = {k: self._build_cell(n, k, previous) for k in range(1, top + 1)}
            logger.info(f"Built row n={n} ({len(row)} cells)")
            yield n, row
            previous = row

    def build(self, n: int, k: int) -> LemmaStructure:
        """The cell (n, k), building every cell it depends on."""
        _check_parameters(n, k)
        for row_n, row in self.iter_rows(n, k):
            if row_n == n:
                return row[k]
        raise InvariantViolationError("grid", n, k, "row never produced")


def build(n: int, k: int, provider: BaseCaseProvider) -> LemmaStructure:
    return LemmaBuilder(provider).build(n, k)


def render_lemma_dump(L: LemmaStructure) -> str:
    """``LEMMA n k``, ``CYCLE`` and the cycle, then one ``PATH`` block per path by start."""
    lines = [f"{LEMMA_TAG} {L.n} {L.k}", "CYCLE"]
    lines.extend(str(v) for v in L.cycle)
    for key in sorted(L.paths):
        lines.append("PATH")
        lines.extend(str(v) for v in L.paths[key])
    return "\n".join(lines) + "\n"


def parse_lemma_dump(text: str) -> LemmaStructure:
    """Read a LEMMA dump; structural validity is left to the verifier."""
    lines = body_lines(text)
    index, fields = split_header(lines, (LEMMA_TAG,))
    header_line = index + 1
    if len(fields) != 3:
        raise CertificateParseError("header must be 'LEMMA <n> <k>'", header_line)
    n, k = (parse_int(f, header_line) for f in fields[1:])
    if n < 1:
        raise CertificateParseError("n must be positive", header_line)
    if index + 1 >= len(lines) or lines[index + 1] != "CYCLE":
        raise CertificateParseError("expected CYCLE", header_line + 1)

    cycle: List[Vertex] = []
    blocks: List[Tuple[int, List[Vertex]]] = []
    for offset, line_text in enumerate(lines[index + 2 :]):
        line_no = header_line + 2 + offset
        if line_text == "PATH":
            blocks.append((line_no, []))
            continue
        v = parse_vertex_line(line_text, n, line_no)
        (blocks[-1][1] if blocks else cycle).append(v)

    paths: Dict[Vertex, Path] = {}
    for line_no, block in blocks:
        if not block:
            raise CertificateParseError("empty path", line_no)
        if block[0] in paths:
            raise CertificateParseError(f"second path starting at {block[0]}", line_no)
        paths[block[0]] = tuple(block)
    return LemmaStructure(n, k, tuple(cycle), paths, part="dump")
