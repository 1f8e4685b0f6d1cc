"""Base case of the induction: Hamilton cycles of the middle layer graph Q(2k+1,k).

Cycles come either from :func:`solve_base`, a deterministic rotation-extension
search that is practical for small k, or from an externally computed
certificate read by :func:`import_certificate`. :func:`normalize_anchor`
relabels positions so that the cycle contains the anchor triple
``(a(n,k), a(n,k+1), b(n,k))``.
"""

import logging
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, TextIO, Tuple

import networkx as nx

from .bitcore import (
    GraphKind,
    Vertex,
    apply_permutation,
    binomial,
    level_vertices,
    make_a,
    make_b,
    to_subset,
)
from .certificate import HCycleCertificate, read_certificate, render_certificate
from .config import SEARCH_BUDGET
from .exceptions import (
    BudgetExhaustedError,
    CertificateParseError,
    CertificateValidationError,
    InvariantViolationError,
    ParameterError,
)
from .verify import verify_certificate

logger = logging.getLogger(__name__)

# Rotations allowed in the first search attempt; doubled on every restart.
INITIAL_ROTATION_LIMIT = 5000


@dataclass(frozen=True)
class MiddleLevelsCycle:
    """A Hamilton cycle of Q(2k+1,k), stored as a cyclic vertex sequence."""

    k: int
    order: Tuple[Vertex, ...]

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    def __len__(self) -> int:
        return len(self.order)

    def to_certificate(self) -> HCycleCertificate:
        return HCycleCertificate.for_graph(GraphKind.cube_levels(self.n, self.k), self.order, "MID")


def middle_layer_graph(k: int) -> nx.Graph:
    """Levels k and k+1 of Q(2k+1) as a networkx graph with Vertex nodes."""
    if k < 1:
        raise ParameterError(f"middle layer graph needs k >= 1, got {k}")
    n = 2 * k + 1
    g = nx.Graph()
    g.add_nodes_from(level_vertices(n, k))
    g.add_nodes_from(level_vertices(n, k + 1))
    for v in level_vertices(n, k):
        for shift in range(n):
            flip = 1 << shift
            if not v.bits & flip:
                g.add_edge(v, Vertex(n, v.bits | flip))
    return g


class _RotationSearch:
    """Rotation-extension search for a Hamilton cycle over an index graph.

    The path always starts at ``start``. It is extended greedily towards the
    unvisited neighbour with the fewest unvisited neighbours of its own. When
    the end is stuck, the path is rotated: for a path neighbour ``path[i]`` of
    the end, ``path[i+1:]`` is reversed and ``path[i+1]`` becomes the new end.
    Every (end, new end) rotation is tried at most once; ties go to the
    smaller ``key``.
    """

    def __init__(self, adjacency: List[List[int]], start: int, key: Sequence[int]):
        self.adjacency = adjacency
        self.start_neighbors = set(adjacency[start])
        self.key = key
        self.size = len(adjacency)
        self.path: List[int] = []
        self.pos = [-1] * self.size
        self.free = [len(nbrs) for nbrs in adjacency]
        self.tried: Set[Tuple[int, int]] = set()
        self.rotations = 0
        self._append(start)

    def _append(self, v: int):
        self.pos[v] = len(self.path)
        self.path.append(v)
        for w in self.adjacency[v]:
            self.free[w] -= 1

    def _extend(self):
        while True:
            options = [w for w in self.adjacency[self.path[-1]] if self.pos[w] < 0]
            if not options:
                return
            self._append(min(options, key=lambda w: (self.free[w], self.key[w])))

    def _rotate(self, i: int):
        self.tried.add((self.path[-1], self.path[i + 1]))
        tail = self.path[i + 1 :]
        tail.reverse()
        self.path[i + 1 :] = tail
        for j in range(i + 1, len(self.path)):
            self.pos[self.path[j]] = j
        self.rotations += 1

    def _pivots(self) -> List[int]:
        end, last = self.path[-1], len(self.path) - 2
        pivots = (self.pos[w] for w in self.adjacency[end])
        return [i for i in pivots if 0 <= i < last and (end, self.path[i + 1]) not in self.tried]

    def run(self, step_limit: int, deadline: float, budget: float) -> Optional[List[int]]:
        """A Hamilton cycle as an index list; None once the attempt is used up."""
        for step in range(step_limit):
            if step % 256 == 0 and time.monotonic() >= deadline:
                raise BudgetExhaustedError(f"middle levels search on {self.size} vertices", budget)
            self._extend()
            full = len(self.path) == self.size
            if full and self.path[-1] in self.start_neighbors:
                return self.path
            pivots = self._pivots()
            if not pivots:
                return None
            if full:
                closing = [i for i in pivots if self.path[i + 1] in self.start_neighbors]
                if closing:
                    self._rotate(closing[0])
                    return self.path
            # new ends with the most unvisited neighbours first
            ends = {i: self.path[i + 1] for i in pivots}
            self._rotate(min(pivots, key=lambda i: (-self.free[ends[i]], self.key[ends[i]])))
        return None


def _oriented(nodes: Sequence[Vertex], found: List[int]) -> Tuple[Vertex, ...]:
    """The cycle from its first vertex, towards the smaller of its two neighbours."""
    order = [nodes[i] for i in found]
    if len(order) > 2 and order[-1] < order[1]:
        order = order[:1] + order[:0:-1]
    return tuple(order)


def solve_base(k: int, budget: float = SEARCH_BUDGET) -> MiddleLevelsCycle:
    """Search a Hamilton cycle of Q(2k+1,k) starting at a(2k+1,k).

    The search is deterministic: attempt ``i`` breaks ties by the affine key
    ``((2i+1) * bits + i) mod 2**n``, a different vertex order per attempt, and
    may rotate ``INITIAL_ROTATION_LIMIT * 2**i`` times. The cycle starts at
    a(2k+1,k) and continues towards the smaller of that vertex's two cycle
    neighbours. Raises BudgetExhaustedError when ``budget`` seconds pass
    without a cycle.
    """
    if k < 1:
        raise ParameterError(f"solve_base needs k >= 1, got {k}")
    n = 2 * k + 1
    graph = middle_layer_graph(k)
    nodes: List[Vertex] = sorted(graph.nodes)
    position = {v: i for i, v in enumerate(nodes)}
    adjacency = [sorted(position[w] for w in graph.adj[v]) for v in nodes]
    start = position[make_a(n, k)]

    started = time.monotonic()
    deadline = started + budget
    attempt = 0
    while True:
        key = [((2 * attempt + 1) * v.bits + attempt) % (1 << n) for v in nodes]
        limit = INITIAL_ROTATION_LIMIT * 2**attempt
        search = _RotationSearch(adjacency, start, key)
        found = search.run(limit, deadline, budget)
        if found is not None:
            logger.info(
                f"Found middle levels cycle for k={k} ({len(found)} vertices) "
                f"after {attempt + 1} attempt(s), {search.rotations} rotation(s) "
                f"in {time.monotonic() - started:.2f}s"
            )
            return MiddleLevelsCycle(k, _oriented(nodes, found))
        logger.debug(
            f"Search attempt {attempt + 1} for k={k} gave up after "
            f"{search.rotations} rotation(s), restarting"
        )
        attempt += 1
        if time.monotonic() >= deadline:
            raise BudgetExhaustedError(f"middle levels search for k={k}", budget)


def anchor_permutation(first: Vertex, second: Vertex) -> Tuple[int, ...]:
    """Position permutation sending ``first`` to a(n,k) and ``second`` to b(n,k).

    Both vertices must lie on level k and share k-1 positions. Shared
    positions go to n-k+1..n-1, the position only in ``first`` to n, the one
    only in ``second`` to n-k, and the rest to 1..k, each in increasing order.
    """
    n = first.n
    k = first.level
    ones_first, ones_second = set(to_subset(first)), set(to_subset(second))
    common = sorted(ones_first & ones_second)
    only_first = sorted(ones_first - ones_second)
    only_second = sorted(ones_second - ones_first)
    if second.level != k or len(only_first) != 1 or len(only_second) != 1:
        raise ParameterError(f"{first} and {second} are not two steps apart on one level")
    rest = [i for i in range(1, n + 1) if i not in ones_first | ones_second]

    target: Dict[int, int] = {}
    for offset, i in enumerate(common):
        target[i] = n - k + 1 + offset
    target[only_first[0]] = n
    target[only_second[0]] = n - k
    for offset, i in enumerate(rest):
        target[i] = 1 + offset
    return tuple(target[i] for i in range(1, n + 1))


def normalize_anchor(cycle: MiddleLevelsCycle) -> MiddleLevelsCycle:
    """Relabel positions so that the cycle contains D(2k+1,k) consecutively.

    The first (k, k+1, k) triple found scanning cyclically from index 0 is
    mapped onto the anchors; the sequence order is unchanged.
    """
    k, n, order = cycle.k, cycle.n, cycle.order
    length = len(order)
    for i in range(length):
        first, middle, third = order[i], order[(i + 1) % length], order[(i + 2) % length]
        if first.level == k and middle.level == k + 1 and third.level == k:
            perm = anchor_permutation(first, third)
            break
    else:
        raise InvariantViolationError("anchor triple", n, k, "no (k, k+1, k) triple on cycle")

    relabelled = tuple(apply_permutation(v, perm) for v in order)
    anchors = (make_a(n, k), make_a(n, k + 1), make_b(n, k))
    if tuple(relabelled[(i + s) % length] for s in range(3)) != anchors:
        raise InvariantViolationError("anchor triple", n, k, f"permutation {perm} misses D")
    logger.debug(f"Normalized k={k} cycle at index {i} with permutation {perm}")
    return MiddleLevelsCycle(k, relabelled)


def import_certificate(stream: TextIO) -> MiddleLevelsCycle:
    """Parse and fully validate a ``MID`` certificate."""
    parsed = read_certificate(stream)
    if parsed.tag != "MID":
        raise CertificateParseError(
            f"expected a MID certificate, got {parsed.tag}", parsed.header_line
        )
    if parsed.k < 1 or parsed.n != 2 * parsed.k + 1:
        raise CertificateParseError(
            f"MID header needs k >= 1 and n = 2k+1, got n={parsed.n} k={parsed.k}",
            parsed.header_line,
        )
    report = verify_certificate(parsed.to_certificate())
    violation = report.first()
    if violation is not None:
        raise CertificateValidationError(violation.clause, violation.index, violation.detail)
    expected = 2 * binomial(parsed.n, parsed.k)
    if parsed.length != expected:
        raise CertificateValidationError(
            "cycle length", None, f"{parsed.length} vertices, a Hamilton cycle needs {expected}"
        )
    return MiddleLevelsCycle(parsed.k, parsed.vertices)


def export_certificate(cycle: MiddleLevelsCycle) -> str:
    """``MID`` certificate text for ``cycle``."""
    return render_certificate(cycle.to_certificate())
