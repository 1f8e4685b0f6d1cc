"""Independent validation of lemma structures and cycle certificates.

Everything here is checked against the graph definitions using only the
primitives of :mod:`kneser_cycles.bitcore`; nothing is reused from the
construction modules.
"""

import itertools
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence

import networkx as nx

from .bitcore import GraphKind, Vertex, adjacent, binomial, hamming_distance, make_a, make_b
from .certificate import HCycleCertificate
from .config import MAX_VIOLATIONS
from .exceptions import BudgetExhaustedError

if TYPE_CHECKING:
    from .lemma_engine import LemmaStructure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """One failed check: clause name, location and a readable detail."""

    clause: str
    index: Optional[int]
    detail: str

    def render(self) -> str:
        location = "-" if self.index is None else str(self.index)
        return f"{self.clause}@{location}: {self.detail}"


@dataclass
class VerificationReport:
    """Outcome of a verification run; ``ok`` iff no violation was recorded."""

    violations: List[Violation] = field(default_factory=list)
    stats: Dict[str, Any] = field(default_factory=dict)
    max_violations: int = MAX_VIOLATIONS
    truncated: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations and not self.truncated

    def add(self, clause: str, index: Optional[int], detail: str):
        if len(self.violations) >= self.max_violations:
            self.truncated = True
            return
        self.violations.append(Violation(clause, index, detail))

    def clauses(self) -> List[str]:
        return [v.clause for v in self.violations]

    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def render(self) -> str:
        if self.ok:
            return "OK\n"
        lines = ["FAIL"] + [v.render() for v in self.violations]
        if self.truncated:
            lines.append(f"... more violations after the first {self.max_violations}")
        return "\n".join(lines) + "\n"


def verify_certificate(
    cert: HCycleCertificate, max_violations: int = MAX_VIOLATIONS
) -> VerificationReport:
    """Check distinctness, adjacency, level membership and the coverage claim.

    Violations are reported phase by phase in that order, by index within a phase.
    """
    report = VerificationReport(max_violations=max_violations)
    graph = cert.graph
    order = cert.order
    length = len(order)
    members = [v.n == graph.n and graph.contains(v) for v in order]

    first_seen: Dict[Vertex, int] = {}
    for i, v in enumerate(order):
        if v in first_seen:
            report.add("duplicate vertex", i, f"{v} already appears at index {first_seen[v]}")
        else:
            first_seen[v] = i

    if length >= 2:
        for i in range(length):
            j = (i + 1) % length
            if members[i] and members[j] and not adjacent(graph, order[i], order[j]):
                report.add("adjacency", i, f"{order[i]} -> {order[j]} is not an edge of {graph}")

    for i, v in enumerate(order):
        if v.n != graph.n:
            report.add("vertex length", i, f"{v} has length {v.n}, expected {graph.n}")
        elif not members[i]:
            report.add(
                "level membership",
                i,
                f"{v} is at level {v.level}, expected one of {list(graph.levels)}",
            )

    total = graph.vertex_count()
    visited, claimed_total = cert.coverage_claim
    if length < 3:
        report.add("cycle length", None, f"a cycle needs at least 3 vertices, got {length}")
    if visited != length:
        report.add("coverage claim", None, f"claims {visited} visited, sequence has {length}")
    if claimed_total != total:
        report.add("coverage claim", None, f"claims {claimed_total} vertices, {graph} has {total}")

    per_level = Counter(v.level for v in first_seen if graph.contains(v))
    report.stats = {
        "graph": str(graph),
        "length": length,
        "distinct": len(first_seen),
        "total": total,
        "per_level": {
            level: (per_level.get(level, 0), binomial(graph.n, level)) for level in graph.levels
        },
    }
    report.stats["hamiltonian"] = report.ok and len(first_seen) == total
    return report


def _cycle_checks(L: "LemmaStructure", report: VerificationReport) -> Dict[Vertex, int]:
    n, k = L.n, L.k
    cycle = L.cycle
    length = len(cycle)
    expected = 2 * binomial(n, k)
    if length != expected:
        report.add("cycle length", None, f"length {length}, expected {expected}")

    usable = [v.n == n for v in cycle]
    for i, v in enumerate(cycle):
        if not usable[i]:
            report.add("cycle vertex length", i, f"{v} has length {v.n}, expected {n}")
        elif v.level not in (k, k + 1):
            report.add("cycle level", i, f"{v} is at level {v.level}, expected {k} or {k + 1}")

    for i in range(length):
        j = (i + 1) % length
        if not (usable[i] and usable[j]):
            continue
        u, w = cycle[i], cycle[j]
        if hamming_distance(u, w) != 1:
            report.add("cycle adjacency", i, f"{u} -> {w} differ in {hamming_distance(u, w)} bits")
        elif u.level == w.level:
            report.add("cycle alternation", i, f"{u} -> {w} stay on level {u.level}")

    index: Dict[Vertex, int] = {}
    for i, v in enumerate(cycle):
        if v in index:
            report.add("cycle duplicate vertex", i, f"{v} already appears at index {index[v]}")
        else:
            index[v] = i

    covered = sum(1 for v in index if v.n == n and v.level == k)
    if covered != binomial(n, k):
        report.add("cycle level-k coverage", None, f"{covered} of {binomial(n, k)} visited")
    return index


def _path_checks(
    L: "LemmaStructure", report: VerificationReport, cycle_index: Dict[Vertex, int]
) -> Dict[Vertex, Vertex]:
    n, k = L.n, L.k
    expected = binomial(n, k)
    if len(L.paths) != expected:
        report.add("path count", None, f"{len(L.paths)} paths, expected {expected}")

    owner: Dict[Vertex, Vertex] = {}
    ends = set()
    for ordinal, key in enumerate(sorted(L.paths)):
        path = L.paths[key]
        if not path:
            report.add("path empty", ordinal, f"path keyed {key} has no vertices")
            continue
        if path[0] != key:
            report.add("path key mismatch", ordinal, f"keyed {key} but starts at {path[0]}")
        for u, w in zip(path, path[1:]):
            if u.n != w.n or hamming_distance(u, w) != 1 or w.level != u.level + 1:
                report.add("path monotonicity", ordinal, f"step {u} -> {w} is not an upward edge")
                break
        start, end = path[0], path[-1]
        if start.level != k + 1:
            report.add("path start level", ordinal, f"{start} is at level {start.level}")
        if end.level != n - k:
            report.add("path end level", ordinal, f"{end} is at level {end.level}")
        if start not in cycle_index:
            report.add("path start on cycle", ordinal, f"{start} is not a cycle vertex")
        ends.add(end)
        for v in path:
            if v in owner:
                report.add(
                    "paths not vertex-disjoint",
                    ordinal,
                    f"{v} lies on the paths starting at {owner[v]} and {key}",
                )
            else:
                owner[v] = key

    for v, i in sorted(cycle_index.items(), key=lambda item: item[1]):
        if v.level == k + 1 and v not in L.paths:
            report.add("cycle vertex without path", i, f"{v} starts no path")

    top = sum(1 for v in ends if v.n == n and v.level == n - k)
    if top != binomial(n, n - k):
        report.add("path end coverage", None, f"{top} of {binomial(n, n - k)} level-{n - k} ends")
    return owner


def _condition_checks(
    L: "LemmaStructure",
    report: VerificationReport,
    cycle_index: Dict[Vertex, int],
    owner: Dict[Vertex, Vertex],
):
    n, k = L.n, L.k
    cycle = L.cycle
    length = len(cycle)
    d_path = (make_a(n, k), make_a(n, k + 1), make_b(n, k))
    found = False
    start = cycle_index.get(d_path[0])
    if start is not None and length:
        forward = tuple(cycle[(start + s) % length] for s in range(3))
        backward = tuple(cycle[(start - s) % length] for s in range(3))
        found = d_path in (forward, backward)
    if not found:
        report.add("condition (i)", None, f"D({n},{k}) = {' '.join(map(str, d_path))} not on cycle")

    a_path = tuple(make_a(n, j) for j in range(k + 1, n - k + 1))
    got = L.paths.get(a_path[0])
    if got is None or tuple(got) != a_path:
        report.add("condition (ii)", None, f"path at {a_path[0]} differs from A({n},{k})")

    for offset, v in enumerate(make_b(n, j) for j in range(k + 1, n - k)):
        if v in owner:
            report.add("condition (iii)", offset, f"B({n},{k}) vertex {v} lies on a path")

    # for n = 2k+1 the cycle covers all of level k+1, b(n,k+1) included
    if n >= 2 * k + 2 and make_b(n, k + 1) in cycle_index:
        report.add("cycle visits b(n,k+1)", cycle_index[make_b(n, k + 1)], "forbidden vertex")


def verify_lemma_structure(
    L: "LemmaStructure", conditions: bool = True, max_violations: int = MAX_VIOLATIONS
) -> VerificationReport:
    """Check the cycle, the monotone paths and (optionally) conditions (i)-(iii).

    With ``conditions=False`` only the unstrengthened statement is checked: a
    cycle covering level k and disjoint monotone paths up to level n-k.
    """
    report = VerificationReport(max_violations=max_violations)
    n, k = L.n, L.k
    if k < 1 or n < 2 * k + 1:
        report.add("parameters", None, f"(n,k)=({n},{k}) needs k >= 1 and n >= 2k+1")
        return report

    cycle_index = _cycle_checks(L, report)
    owner = _path_checks(L, report, cycle_index)
    if conditions:
        _condition_checks(L, report, cycle_index, owner)

    report.stats = {
        "n": n,
        "k": k,
        "cycle_length": len(L.cycle),
        "path_count": len(L.paths),
        "path_vertices": len(owner),
    }
    return report


def graph_to_networkx(graph: GraphKind) -> nx.Graph:
    """Explicit networkx graph of ``graph``, nodes in canonical vertex order."""
    vertices = list(graph.vertices())
    g = nx.Graph()
    g.add_nodes_from(vertices)
    g.add_edges_from(
        (u, v) for u, v in itertools.combinations(vertices, 2) if adjacent(graph, u, v)
    )
    return g


def exhaustive_hamilton_oracle(graph: GraphKind, budget: float = 10.0) -> bool:
    """True iff ``graph`` has a Hamilton cycle, by exhaustive backtracking.

    Intended for graphs of a few dozen vertices. Raises BudgetExhaustedError
    if the search takes longer than ``budget`` seconds.
    """
    g = graph_to_networkx(graph)
    nodes: Sequence[Vertex] = list(g.nodes)
    size = len(nodes)
    if size < 3:
        return False
    position = {v: i for i, v in enumerate(nodes)}
    neighbors = [sorted(position[w] for w in g.adj[v]) for v in nodes]
    if any(len(nbrs) < 2 for nbrs in neighbors):
        return False

    deadline = time.monotonic() + budget
    visited = [False] * size
    visited[0] = True
    path = [0]

    def available(w: int, end: int) -> int:
        return sum(1 for x in neighbors[w] if not visited[x] or x == end or x == 0)

    def extend() -> bool:
        if time.monotonic() > deadline:
            raise BudgetExhaustedError(f"Hamilton oracle on {graph}", budget)
        tail = path[-1]
        if len(path) == size:
            return 0 in neighbors[tail]
        for nxt in neighbors[tail]:
            if visited[nxt]:
                continue
            visited[nxt] = True
            path.append(nxt)
            stranded = any(
                not visited[w] and available(w, nxt) < 2 for w in neighbors[tail] if w != nxt
            )
            if not stranded and extend():
                return True
            path.pop()
            visited[nxt] = False
        return False

    found = extend()
    logger.debug(f"Hamilton oracle on {graph}: {found}")
    return found
