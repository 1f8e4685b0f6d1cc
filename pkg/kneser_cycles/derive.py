"""Cycles in H(n,k), K(n,k) and Q(n,k) derived from built lemma structures.

The ``*_from_structure`` functions are pure and work on a structure that is
already built; the provider-taking functions build what they need first.
Certificates traverse the cycle starting at b(n,k) (see
:meth:`LemmaStructure.certificate_order`).
"""

import logging
from fractions import Fraction

from .bitcore import GraphKind, Vertex, append_bit, binomial, complement
from .certificate import HCycleCertificate
from .config import MAX_N
from .exceptions import ParameterError
from .lemma_engine import LemmaBuilder, LemmaStructure
from .providers import BaseCaseProvider

logger = logging.getLogger(__name__)


def _check_kneser_parameters(n: int, k: int):
    if k < 1 or n < 2 * k + 1:
        raise ParameterError(f"need k >= 1 and n >= 2k+1, got (n,k)=({n},{k})")
    if n > MAX_N:
        raise ParameterError(f"n={n} exceeds the configured maximum {MAX_N}")


def coverage_fraction(n: int, k: int) -> Fraction:
    """Exact share of K(n,k) visited by :func:`kneser_cycle`: 2k/n, or 1 for k = 1."""
    _check_kneser_parameters(n, k)
    if k == 1:
        return Fraction(1)
    return Fraction(2 * binomial(n - 1, k - 1), binomial(n, k))


def hamilton_from_structure(L: LemmaStructure) -> HCycleCertificate:
    """Hamilton cycle of H(n,k): every level-(k+1) cycle vertex is replaced by its path's end."""
    order = []
    for i, v in enumerate(L.certificate_order()):
        order.append(v if i % 2 == 0 else L.paths[v][-1])
    return HCycleCertificate.for_graph(GraphKind.bip_kneser(L.n, L.k), order)


def singleton_kneser_cycle(n: int) -> HCycleCertificate:
    """Hamilton cycle {1}, {2}, ..., {n} of K(n,1)."""
    _check_kneser_parameters(n, 1)
    order = [Vertex.from_subset(n, [i]) for i in range(1, n + 1)]
    return HCycleCertificate.for_graph(GraphKind.kneser(n, 1), order)


def kneser_from_structure(L: LemmaStructure, n: int) -> HCycleCertificate:
    """Cycle in K(n,k) from the (n-1, k-1) structure, k >= 2.

    Level-(k-1) vertices get a 1 appended. Each level-k vertex is replaced by
    its path's level-(n-k-1) vertex, complemented, with a 0 appended.
    """
    if L.n != n - 1:
        raise ParameterError(f"K({n},k) needs the ({n - 1}, k-1) structure, got ({L.n},{L.k})")
    k = L.k + 1
    offset = n - 2 * k - 1
    order = []
    for i, v in enumerate(L.certificate_order()):
        if i % 2 == 0:
            order.append(append_bit(v, 1))
        else:
            order.append(append_bit(complement(L.paths[v][offset]), 0))
    return HCycleCertificate.for_graph(GraphKind.kneser(n, k), order)


def cube_levels_from_structure(L: LemmaStructure, complemented: bool = False) -> HCycleCertificate:
    """The structure's cycle as a cycle of Q(n,k).

    With ``complemented`` every vertex is inverted, giving a cycle of
    Q(n, n-k-1) that visits all of level n-k.
    """
    order = L.certificate_order()
    if not complemented:
        return HCycleCertificate.for_graph(GraphKind.cube_levels(L.n, L.k), order)
    return HCycleCertificate.for_graph(
        GraphKind.cube_levels(L.n, L.n - L.k - 1), [complement(v) for v in order]
    )


def bipartite_hamilton(n: int, k: int, provider: BaseCaseProvider) -> HCycleCertificate:
    """Hamilton cycle of H(n,k)."""
    _check_kneser_parameters(n, k)
    return hamilton_from_structure(LemmaBuilder(provider).build(n, k))


def kneser_cycle(n: int, k: int, provider: BaseCaseProvider) -> HCycleCertificate:
    """Cycle in K(n,k) of length 2*C(n-1,k-1); a Hamilton cycle for k = 1."""
    _check_kneser_parameters(n, k)
    if k == 1:
        return singleton_kneser_cycle(n)
    return kneser_from_structure(LemmaBuilder(provider).build(n - 1, k - 1), n)


def qnk_cycle(n: int, k: int, provider: BaseCaseProvider) -> HCycleCertificate:
    """Cycle in Q(n,k) visiting all of the smaller of levels k and k+1."""
    if n < 3 or not 1 <= k <= n - 2:
        raise ParameterError(f"Q(n,k) cycles need n >= 3 and 1 <= k <= n-2, got ({n},{k})")
    if n > MAX_N:
        raise ParameterError(f"n={n} exceeds the configured maximum {MAX_N}")
    if 2 * k + 1 <= n:
        return cube_levels_from_structure(LemmaBuilder(provider).build(n, k))
    dual = n - k - 1
    logger.debug(f"Q({n},{k}) from the complement of Q({n},{dual})")
    return cube_levels_from_structure(LemmaBuilder(provider).build(n, dual), complemented=True)
