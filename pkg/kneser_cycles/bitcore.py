"""Bitstring vertices of the hypercube and the primitives the construction uses.

Position 1 is the leftmost character of a vertex's textual form. A vertex stores
its symbols as an integer whose most significant bit (of ``n``) is position 1, so
ordering vertices by ``bits`` orders them as binary numbers. Python integers have
no width limit, so the same representation serves every ``n``.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from .exceptions import ParameterError

Permutation = Union[Sequence[int], Mapping[int, int]]


@dataclass(frozen=True, order=True)
class Vertex:
    """A length-``n`` bitstring; immutable and hashable."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"vertex length must be positive, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ParameterError(f"bits {self.bits} do not fit in length {self.n}")

    @classmethod
    def from_string(cls, text: str) -> "Vertex":
        """Parse the textual form: ``n`` characters from {0,1}, position 1 first."""
        if not text or any(c not in "01" for c in text):
            raise ParameterError(f"not a bitstring: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def from_subset(cls, n: int, positions: Iterable[int]) -> "Vertex":
        """Characteristic vector of a subset of {1..n}."""
        bits = 0
        for i in positions:
            if not 1 <= i <= n:
                raise ParameterError(f"position {i} outside 1..{n}")
            bits |= 1 << (n - i)
        return cls(n, bits)

    def bit(self, i: int) -> int:
        """Symbol at 1-based position ``i``."""
        if not 1 <= i <= self.n:
            raise ParameterError(f"position {i} outside 1..{self.n}")
        return (self.bits >> (self.n - i)) & 1

    @property
    def level(self) -> int:
        return bin(self.bits).count("1")

    def __str__(self) -> str:
        return format(self.bits, f"0{self.n}b")


def _mask(n: int) -> int:
    return (1 << n) - 1


def level_of(v: Vertex) -> int:
    """Number of 1-symbols of ``v``."""
    return v.level


def make_a(n: int, k: int) -> Vertex:
    """``0^(n-k) 1^k``: the level-k vertex with its 1-bits at the last k positions."""
    if n < 1 or not 0 <= k <= n:
        raise ParameterError(f"a(n,k) needs n >= 1 and 0 <= k <= n, got ({n},{k})")
    return Vertex(n, _mask(k))


def make_b(n: int, k: int) -> Vertex:
    """``a(n-1,k)`` followed by a 0."""
    if n < 2 or not 1 <= k <= n - 1:
        raise ParameterError(f"b(n,k) needs n >= 2 and 1 <= k <= n-1, got ({n},{k})")
    return append_bit(make_a(n - 1, k), 0)


def rotate(v: Vertex, shift: int) -> Vertex:
    """Cyclic left shift by ``shift`` positions (bit 2 moves into position 1)."""
    shift %= v.n
    if shift == 0:
        return v
    bits = ((v.bits << shift) | (v.bits >> (v.n - shift))) & _mask(v.n)
    return Vertex(v.n, bits)


def append_bit(v: Vertex, b: int) -> Vertex:
    """Concatenation ``v ∘ b``."""
    if b not in (0, 1):
        raise ParameterError(f"bit must be 0 or 1, got {b!r}")
    return Vertex(v.n + 1, (v.bits << 1) | b)


def complement(v: Vertex) -> Vertex:
    """Flip every symbol."""
    return Vertex(v.n, v.bits ^ _mask(v.n))


def _as_mapping(n: int, perm: Permutation) -> Mapping[int, int]:
    if isinstance(perm, Mapping):
        mapping = dict(perm)
    else:
        mapping = {i + 1: target for i, target in enumerate(perm)}
    if sorted(mapping) != list(range(1, n + 1)) or sorted(mapping.values()) != list(
        range(1, n + 1)
    ):
        raise ParameterError(f"not a bijection on positions 1..{n}: {perm!r}")
    return mapping


def apply_permutation(v: Vertex, perm: Permutation) -> Vertex:
    """Relabel positions so that bit ``perm(i)`` of the result is bit ``i`` of ``v``.

    ``perm`` is either a mapping ``{i: perm(i)}`` or a sequence whose entry
    ``i-1`` is ``perm(i)``; both are 1-based.
    """
    mapping = _as_mapping(v.n, perm)
    bits = 0
    for i, target in mapping.items():
        if v.bit(i):
            bits |= 1 << (v.n - target)
    return Vertex(v.n, bits)


def swap_positions(n: int, i: int, j: int) -> Tuple[int, ...]:
    """The transposition of positions ``i`` and ``j`` as a permutation sequence."""
    perm = list(range(1, n + 1))
    perm[i - 1], perm[j - 1] = j, i
    return tuple(perm)


def hamming_distance(u: Vertex, v: Vertex) -> int:
    if u.n != v.n:
        raise ParameterError(f"length mismatch: {u} vs {v}")
    return bin(u.bits ^ v.bits).count("1")


def to_subset(v: Vertex) -> Tuple[int, ...]:
    """Strictly increasing positions holding a 1-symbol."""
    return tuple(i for i in range(1, v.n + 1) if v.bit(i))


def format_subset(v: Vertex) -> str:
    """Subset textual form ``{i1,i2,...}``."""
    return "{" + ",".join(str(i) for i in to_subset(v)) + "}"


def level_vertices(n: int, level: int) -> Iterator[Vertex]:
    """All vertices of Q(n) in ``level``, ascending as binary numbers."""
    found = []
    for positions in itertools.combinations(range(n), level):
        bits = 0
        for p in positions:
            bits |= 1 << p
        found.append(bits)
    for bits in sorted(found):
        yield Vertex(n, bits)


class GraphFamily(str, Enum):
    """The four graph families built on bitstrings."""

    CUBE = "CUBE"
    CUBE_LEVELS = "CUBE_LEVELS"
    KNESER = "KNESER"
    BIP_KNESER = "BIP_KNESER"


@dataclass(frozen=True)
class GraphKind:
    """Q(n), Q(n,k), K(n,k) or H(n,k)."""

    family: GraphFamily
    n: int
    k: Optional[int] = None

    def __post_init__(self):
        family, n, k = self.family, self.n, self.k
        if n < 1:
            raise ParameterError(f"n must be positive, got {n}")
        if family == GraphFamily.CUBE:
            if k is not None:
                raise ParameterError("CUBE takes no k")
        elif family == GraphFamily.CUBE_LEVELS:
            if k is None or not 0 <= k <= n - 1:
                raise ParameterError(f"CUBE_LEVELS needs 0 <= k <= n-1, got ({n},{k})")
        elif k is None or k < 1 or n < 2 * k + 1:
            raise ParameterError(f"{family.value} needs k >= 1 and n >= 2k+1, got ({n},{k})")

    @classmethod
    def cube(cls, n: int) -> "GraphKind":
        return cls(GraphFamily.CUBE, n)

    @classmethod
    def cube_levels(cls, n: int, k: int) -> "GraphKind":
        return cls(GraphFamily.CUBE_LEVELS, n, k)

    @classmethod
    def kneser(cls, n: int, k: int) -> "GraphKind":
        return cls(GraphFamily.KNESER, n, k)

    @classmethod
    def bip_kneser(cls, n: int, k: int) -> "GraphKind":
        return cls(GraphFamily.BIP_KNESER, n, k)

    @property
    def levels(self) -> Tuple[int, ...]:
        """Levels of Q(n) forming the vertex set, ascending."""
        if self.family == GraphFamily.CUBE:
            return tuple(range(self.n + 1))
        assert self.k is not None
        if self.family == GraphFamily.CUBE_LEVELS:
            return (self.k, self.k + 1)
        if self.family == GraphFamily.KNESER:
            return (self.k,)
        return (self.k, self.n - self.k)

    def vertex_count(self) -> int:
        return sum(comb(self.n, level) for level in self.levels)

    def vertices(self) -> Iterator[Vertex]:
        """Vertex set in canonical order: by level, then as binary numbers."""
        for level in self.levels:
            yield from level_vertices(self.n, level)

    def contains(self, v: Vertex) -> bool:
        return v.n == self.n and v.level in self.levels

    def __str__(self) -> str:
        if self.family == GraphFamily.CUBE:
            return f"CUBE({self.n})"
        return f"{self.family.value}({self.n},{self.k})"


def adjacent(graph: GraphKind, u: Vertex, v: Vertex) -> bool:
    """Edge relation of ``graph``; symmetric in ``u`` and ``v``."""
    for w in (u, v):
        if w.n != graph.n:
            raise ParameterError(f"length mismatch: {w} is not a vertex of {graph}")
        if not graph.contains(w):
            raise ParameterError(f"{w} lies outside the levels of {graph}")
    if graph.family in (GraphFamily.CUBE, GraphFamily.CUBE_LEVELS):
        return hamming_distance(u, v) == 1
    if graph.family == GraphFamily.KNESER:
        return u.bits & v.bits == 0
    if u.level == v.level:
        return False
    small, large = (u, v) if u.level < v.level else (v, u)
    return small.bits & ~large.bits == 0


def binomial(n: int, k: int) -> int:
    """C(n,k), zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)
